#include "gsf/represent.hpp"

#include <algorithm>
#include <climits>
#include <cmath>

#include "gsf/detail/limits.hpp"
#include "gsf/error.hpp"
#include "gsf/specfun.hpp"

namespace gsf {

using specfun::binomial;
using specfun::falling_factorial;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_admissible(const Measure& mu, double lam) {
  const Admissibility adm = levy_admissibility(mu, lam);
  if (!adm.admissible) {
    throw ConstructionError(
        "measure is not admissible (need int_(0,1] dmu < inf and int_(1,inf) t^-lambda dmu < inf): " + adm.diagnostics);
  }
}

// M(s) = int_(s,inf) t^{-lam} dmu on one segment between breakpoints of mu.
class TailModel final : public DensityModel {
 public:
  TailModel(Measure mu, double lam, int J, Provenance prov, double zero_exp)
      : mu_(std::move(mu)), lam_(lam), J_(J), prov_(prov), zero_exp_(zero_exp) {}
  double eval(int j, double s) const override {
    if (j == 0) return tail_power_integral(mu_, lam_, s);
    double sum = 0.0;
    for (int i = 0; i <= j - 1; ++i) {
      sum += binomial(j - 1, i) * falling_factorial(-lam_, i) * std::pow(s, -lam_ - i) * mu_.density_at(j - 1 - i, s);
    }
    return -sum;
  }
  int max_order() const override { return J_; }
  Provenance provenance() const override { return prov_; }
  double zero_exponent() const override { return zero_exp_; }
  std::string describe() const override { return "tail[" + mu_.describe() + "]"; }

 private:
  Measure mu_;
  double lam_;
  int J_;
  Provenance prov_;
  double zero_exp_;
};

double sign_of(int n) { return n % 2 ? -1.0 : 1.0; }

double central_difference(const std::function<double(double)>& g, int j, double u, double h) {
  double sum = 0.0;
  for (int i = 0; i <= j; ++i) sum += sign_of(i) * binomial(j, i) * g(u + (0.5 * j - i) * h);
  return sum / std::pow(h, j);
}

bool strictly_decreasing(const std::vector<double>& v) {
  for (size_t i = 1; i < v.size(); ++i)
    if (!(v[i] < v[i - 1])) return false;
  return true;
}

}  // namespace

BernsteinFunction::BernsteinFunction(double alpha, double beta, double lam, Measure mu)
    : alpha_(alpha), beta_(beta), lam_(lam), mu_(std::move(mu)), h_(GSFunction::laplace(1.0, mu_, alpha * lam)) {}

double BernsteinFunction::value(double x) const {
  if (!(x > 0.0)) throw DomainError("evaluation point must be positive");
  const double lam = lam_;
  double sum = alpha_ * std::pow(x, lam) + beta_;
  MeasureIntegral spec;
  spec.breakpoints = {1.0 / x};
  const auto r = integrate_against(
      mu_, [x, lam](double t) { return specfun::lower_incomplete_gamma(lam, x * t) * std::pow(t, -lam); }, spec);
  if (r.status == quad::Status::divergent) throw DivergenceError("bernstein measure", r.diagnostics);
  if (r.status == quad::Status::not_converged) throw QuadratureError("bernstein measure: " + r.diagnostics);
  return sum + r.value;
}

double BernsteinFunction::derivative(double x) const { return std::pow(x, lam_ - 1.0) * h_.eval(x); }

BernsteinFunction bernstein_build(double alpha, double beta, double lam, const Measure& mu) {
  specfun::GammaArg check(lam);
  if (alpha < 0.0 || beta < 0.0) throw ConstructionError("alpha and beta must be non-negative");
  require_admissible(mu, lam);
  return BernsteinFunction(alpha, beta, lam, mu);
}

Measure tail_density_measure(const Measure& mu, double lam) {
  const std::vector<double> cuts = mu.breakpoints();
  const int J = mu.has_density() ? std::min(mu.max_order() + 1, SmoothDensity::kClosedFormOrder)
                                 : SmoothDensity::kClosedFormOrder;
  double zero_exp = 0.0;
  for (const auto& p : mu.pieces()) {
    if (p.a == 0.0) zero_exp = std::min(zero_exp, 1.0 - lam + p.density.zero_exponent());
  }
  std::vector<DensityPiece> pieces;
  std::vector<double> edges{0.0};
  edges.insert(edges.end(), cuts.begin(), cuts.end());
  edges.push_back(kInf);
  for (size_t i = 0; i + 1 < edges.size(); ++i) {
    const double a = edges[i], b = edges[i + 1];
    if (!(b > a)) continue;
    const bool beyond =
        std::none_of(mu.atoms().begin(), mu.atoms().end(), [a](const Atom& at) { return at.s > a; }) &&
        std::none_of(mu.pieces().begin(), mu.pieces().end(), [a](const DensityPiece& p) { return p.b > a; });
    if (beyond) continue;  // M vanishes identically there
    if (!mu.has_density()) {
      double level = 0.0;
      for (const auto& at : mu.atoms())
        if (at.s > a) level += at.w * std::pow(at.s, -lam);
      pieces.push_back({a, b, SmoothDensity::power_law(level, 0.0)});
    } else {
      pieces.push_back(
          {a, b,
           SmoothDensity(std::make_shared<TailModel>(mu, lam, J, Provenance::quadrature, a == 0.0 ? zero_exp : 0.0))});
    }
  }
  return Measure({}, std::move(pieces));
}

GSFunction levy_tail_build(double alpha, double beta, double lam, const Measure& mu) {
  specfun::GammaArg check(lam);
  if (alpha < 0.0 || beta < 0.0) throw ConstructionError("alpha and beta must be non-negative");
  require_admissible(mu, lam);
  return GSFunction::laplace(lam, tail_density_measure(mu, lam), alpha, beta);
}

double MChain::M(int j, double u) const {
  if (j < 1 || j > k) throw DomainError("M_j is defined for 1 <= j <= k");
  if (!(u > 0.0)) throw DomainError("u must be positive");
  const int m = k - j;
  const double inv_u = 1.0 / u;
  const double norm = 1.0 / specfun::factorial(m);
  const double l = lam;
  MeasureIntegral spec;
  spec.from = u;
  spec.breakpoints = breakpoints;
  const auto r =
      integrate_against(mu_k, [inv_u, m, l](double s) { return std::pow(inv_u - 1.0 / s, m) * std::pow(s, -l); }, spec);
  if (r.status == quad::Status::divergent) throw DivergenceError("M chain", r.diagnostics);
  return norm * r.value;
}

MChain m_chain(const Measure& mu_k, double lam, int k) {
  specfun::GammaArg check(lam);
  if (k < 1) throw DomainError("the M chain needs k >= 1");
  MChain chain;
  chain.lam = lam;
  chain.k = k;
  chain.mu_k = mu_k;
  chain.breakpoints = mu_k.breakpoints();
  const double probe = tail_power_integral(mu_k, lam, 1.0);
  if (!std::isfinite(probe)) throw ConstructionError("tail integral of mu_k diverges");
  return chain;
}

MChain m_chain_from_function(const GSFunction& f, int k) {
  if (k < 1) throw DomainError("the M chain needs k >= 1");
  const double lam = f.lam();
  Measure mu_k = f.has_integral_part() ? derived_measure(f.laplace_measure(), k).power_weighted(lam - 1.0) : Measure();
  MChain chain = m_chain(mu_k, lam, k);
  const GSFunction I = f.without_power_terms();

  double l = 0.0, b = 0.0;
  for (const auto& t : f.power_terms()) {
    if (t.p == 0.0) b += t.coef * specfun::pochhammer(lam, k);
    const double lead = t.coef * falling_factorial(lam - 1.0 + k - t.p, k - 1);
    if (t.p == lam) {
      l += lead;
    } else if (t.p > lam && lead != 0.0) {
      l = kInf;
    }
  }
  if (I.has_integral_part()) {
    std::vector<double> small;
    for (int e = 3; e <= 8; ++e) small.push_back(weighted_power_derivative(I, k, k - 1, std::pow(10.0, -e)));
    const size_t n = small.size();
    l += detail::aitken(small[n - 3], small[n - 2], small[n - 1]);
    std::vector<double> large;
    for (int e = 3; e <= 5; ++e) large.push_back(c_op(I, k, std::pow(10.0, e)));
    b += detail::aitken(large[0], large[1], large[2]);
  }
  chain.l_k = l;
  chain.b_k = b;
  return chain;
}

double reconstruct(const MChain& chain, double x) {
  if (!(x > 0.0)) throw DomainError("evaluation point must be positive");
  const double lam = chain.lam;
  const int k = chain.k;
  double v = chain.b_k / specfun::pochhammer(lam, k) + chain.l_k * std::pow(x, -lam) / specfun::factorial(k - 1);
  if (chain.mu_k.empty()) return v;
  std::vector<double> bps = chain.breakpoints;
  bps.push_back(1.0 / x);
  quad::RangeSpec range;
  range.a = 0.0;
  range.b = kInf;
  range.exponent_at_zero = lam - 1.0;
  range.breakpoints = bps;
  quad::Options opts;
  opts.rel_tol = 1e-9;
  const auto r = quad::integrate_range(
      [&chain, x, k, lam](double u) {
        const double m1 = chain.M(1, u);
        return m1 == 0.0 ? 0.0 : m1 * std::exp(-x * u + (k + lam - 2.0) * std::log(u));
      },
      range, opts);
  if (r.status == quad::Status::divergent) throw DivergenceError("reconstruction", r.diagnostics);
  return v + r.value;
}

ReconstructionReport reconstruction_check(const GSFunction& f, const MChain& chain, const std::vector<double>& xs) {
  ReconstructionReport rep;
  rep.xs = xs;
  for (double x : xs) {
    const double fv = f.eval(x);
    const double rv = reconstruct(chain, x);
    rep.f_values.push_back(fv);
    rep.reconstructed.push_back(rv);
    rep.max_gap = std::max(rep.max_gap, std::abs(rv - fv) / std::max(1.0, std::abs(fv)));
  }
  return rep;
}

double m_recursion_gap(const MChain& chain, const std::vector<double>& us) {
  double gap = 0.0;
  for (int j = 1; j < chain.k; ++j) {
    for (double u : us) {
      quad::RangeSpec range;
      range.a = u;
      range.b = kInf;
      range.breakpoints = chain.breakpoints;
      const auto r = quad::integrate_range([&chain, j](double s) { return chain.M(j + 1, s) / (s * s); }, range);
      const double mj = chain.M(j, u);
      gap = std::max(gap, std::abs(mj - r.value) / std::max(1.0, std::abs(mj)));
    }
  }
  return gap;
}

ChainSignReport chain_inequalities_check(const MChain& chain, int j_max, const ScanGrid& grid) {
  grid.validate();
  ChainSignReport rep;
  const int top = std::min({j_max, chain.k - 1, 3});
  for (int j = 1; j <= top; ++j) {
    ChainSignOrder so;
    so.j = j;
    auto G = [&chain, j](double u) { return chain.M(chain.k - j + 1, u) * std::pow(u, j - 1); };
    bool first = true;
    double scale = 0.0;
    for (double u : grid.points) {
      const double h = 1e-2 * u;
      const double v1 = sign_of(j) * central_difference(G, j, u, h);
      const double v2 = sign_of(j) * central_difference(G, j, u, 0.5 * h);
      if (first) scale = std::max(std::abs(v1), std::abs(v2));
      const double m = std::min(v1, v2);
      if (first || m < std::min(so.min_value, so.min_value_half)) so.witness = u;
      so.min_value = first ? v1 : std::min(so.min_value, v1);
      so.min_value_half = first ? v2 : std::min(so.min_value_half, v2);
      first = false;
    }
    so.tolerance = grid.tolerance * (1.0 + scale);
    so.verdict = std::min(so.min_value, so.min_value_half) >= -so.tolerance ? Verdict::pass : Verdict::fail;
    if (so.verdict == Verdict::fail) rep.verdict = Verdict::fail;
    rep.orders.push_back(so);
  }
  return rep;
}

DecayProbe tail_decay_probe(const MChain& chain) {
  DecayProbe p;
  for (int e = 1; e <= 6; ++e) {
    const double u = std::pow(10.0, -e);
    p.points.push_back(u);
    p.values.push_back(std::pow(u, chain.lam) * chain.M(chain.k, u));
  }
  const bool toward_zero = std::abs(p.values.back()) <= 1e-2 * std::max(std::abs(p.values.front()), 1e-300);
  const bool all_zero = std::all_of(p.values.begin(), p.values.end(), [](double v) { return v == 0.0; });
  p.verdict = all_zero || (strictly_decreasing(p.values) && toward_zero) ? Verdict::pass : Verdict::fail;
  return p;
}

NChainReport n_chain(const MChain& chain, const ScanGrid& grid) {
  grid.validate();
  NChainReport rep;
  std::vector<double> inv_bps;
  for (double b : chain.breakpoints) inv_bps.push_back(1.0 / b);
  for (int j = 1; j < chain.k; ++j) {
    for (double u : grid.points) {
      quad::RangeSpec range;
      range.a = 0.0;
      range.b = u;
      range.breakpoints = inv_bps;
      const auto r = quad::integrate_range([&chain, j](double t) { return chain.N(j + 1, t); }, range);
      const double nj = chain.N(j, u);
      rep.max_integral_gap = std::max(rep.max_integral_gap, std::abs(nj - r.value) / std::max(1.0, std::abs(nj)));
    }
  }
  if (rep.max_integral_gap > 1e-7) rep.verdict = Verdict::fail;
  auto N1 = [&chain](double u) { return chain.N(1, u); };
  for (int j = 0; j <= std::min(chain.k - 1, SmoothDensity::kFiniteDifferenceCap); ++j) {
    DecayProbe p;
    for (int e = 1; e <= 4; ++e) {
      const double u = std::pow(10.0, -e);
      p.points.push_back(u);
      p.values.push_back(central_derivative(N1, j, u));
    }
    bool monotone = true;
    for (size_t i = 1; i < p.values.size(); ++i)
      monotone = monotone && std::abs(p.values[i]) <= std::abs(p.values[i - 1]) * (1 + 1e-12) + 1e-300;
    const bool small = std::abs(p.values.back()) <= 1e-6 * std::max(1.0, std::abs(p.values.front()));
    p.verdict = monotone && small ? Verdict::pass : Verdict::fail;
    if (p.verdict == Verdict::fail) rep.verdict = Verdict::fail;
    rep.boundary_derivs.push_back(std::move(p));
  }
  return rep;
}

double AsymptoticExpansion::remainder(int n, double x) const {
  if (n < 0 || n > static_cast<int>(alpha.size())) throw DomainError("remainder order out of range");
  double sum = std::pow(x, lam - 1.0) * f.eval(x);
  for (int k = 0; k < n; ++k) sum -= alpha[k] * std::pow(x, -k - 1.0);
  return sum;
}

AsymptoticExpansion asymptotic_expand(const Measure& mu, double lam, int n) {
  specfun::GammaArg check(lam);
  if (n < 0) throw DomainError("n must be non-negative");
  AsymptoticExpansion e{lam, {}, GSFunction::stieltjes(lam, mu)};
  for (int k = 0; k < n; ++k) {
    const double s = moment(mu, k);
    if (!std::isfinite(s))
      throw DivergenceError("moment " + std::to_string(k), "moment of order " + std::to_string(k) + " is infinite");
    e.alpha.push_back(sign_of(k) * specfun::pochhammer(lam, k) * s / specfun::factorial(k));
  }
  return e;
}

std::vector<DecayProbe> asymptotic_decay(const AsymptoticExpansion& e, int n) {
  std::vector<DecayProbe> out;
  for (int m = 0; m <= n; ++m) {
    DecayProbe p;
    for (double x : {10.0, 100.0, 1000.0}) {
      p.points.push_back(x);
      p.values.push_back(std::abs(std::pow(x, m) * e.remainder(m, x)));
    }
    const bool zero = std::all_of(p.values.begin(), p.values.end(), [](double v) { return v == 0.0; });
    p.verdict = zero || strictly_decreasing(p.values) ? Verdict::pass : Verdict::fail;
    out.push_back(std::move(p));
  }
  return out;
}

RhoReport rho_recursion_check(const Measure& mu, double lam, int k, const ScanGrid& grid, double tol) {
  specfun::GammaArg check(lam);
  if (k < 0) throw DomainError("k must be non-negative");
  if (mu.has_atoms()) throw DomainError("rho_recursion_check requires a density measure");
  grid.validate();
  RhoReport rep;
  rep.tolerance = tol;
  for (const auto& piece : mu.pieces()) {
    const SmoothDensity uk = piece.density.derived(k);
    const SmoothDensity uk1 = piece.density.derived(k + 1);
    auto v = [&uk, lam](double s) { return std::pow(s, lam - 1.0) * uk(s); };
    auto v1 = [&uk1, lam](double s) { return std::pow(s, lam - 1.0) * uk1(s); };
    const double base = piece.a > 0.0 ? piece.a * v(piece.a) : 0.0;
    for (double s : grid.points) {
      if (!(s > piece.a && s < piece.b)) continue;
      ++rep.points;
      const double lhs = s * central_derivative(v, 1, s);
      const double rhs = (lam + k - 1.0) * v(s) - v1(s);
      rep.max_differential_gap =
          std::max(rep.max_differential_gap, std::abs(lhs - rhs) / (1.0 + std::max(std::abs(lhs), std::abs(rhs))));

      quad::RangeSpec range;
      range.a = piece.a;
      range.b = s;
      range.exponent_at_zero = lam - 1.0 + uk.zero_exponent();
      const auto r = quad::integrate_range([&](double u) { return (lam + k) * v(u) - v1(u); }, range);
      const double conv_lhs = s * v(s) - base;
      rep.max_convolution_gap =
          std::max(rep.max_convolution_gap, std::abs(conv_lhs - r.value) / (1.0 + std::abs(conv_lhs)));
    }
  }
  if (rep.points == 0) {
    rep.differential = rep.convolution = Verdict::inconclusive;
  } else {
    rep.differential = rep.max_differential_gap <= tol ? Verdict::pass : Verdict::fail;
    rep.convolution = rep.max_convolution_gap <= tol ? Verdict::pass : Verdict::fail;
  }
  return rep;
}

LambdaShift lambda_shift_density(const Measure& mu, double lam1, double lam2, int k, const ScanGrid& grid) {
  specfun::GammaArg c1(lam1), c2(lam2);
  if (!(lam2 > lam1)) throw DomainError("lambda_shift_density requires lam2 > lam1");
  if (k < 0) throw DomainError("k must be non-negative");
  const double delta = lam2 - lam1;
  const Measure direct = derived_measure(mu.power_weighted(-delta), k);
  std::vector<DensityPiece> pieces;
  for (const auto& p : mu.pieces()) {
    std::vector<std::pair<double, SmoothDensity>> terms;
    for (int j = 0; j <= k; ++j) {
      terms.push_back({binomial(k, j) * specfun::gamma_ratio(k - j + delta, delta), p.density.derived(j)});
    }
    pieces.push_back({p.a, p.b, SmoothDensity::linear_combination(terms).power_weighted(-delta)});
  }
  LambdaShift out{Measure(direct.atoms(), std::move(pieces)), {}, 0.0};
  out.scan = positivity_scan(out.shifted, grid);
  for (double s : grid.points) {
    const double a = out.shifted.density_at(0, s);
    const double b = direct.density_at(0, s);
    out.cross_check_gap = std::max(out.cross_check_gap, std::abs(a - b) / (1.0 + std::abs(b)));
  }
  return out;
}

}  // namespace gsf
