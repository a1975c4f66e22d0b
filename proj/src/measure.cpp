#include "gsf/measure.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <sstream>

#include "gsf/error.hpp"

namespace gsf {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::pass:
      return "pass";
    case Verdict::fail:
      return "fail";
    case Verdict::inconclusive:
      return "inconclusive";
  }
  return "unknown";
}

Measure::Measure(std::vector<Atom> atoms, std::vector<DensityPiece> pieces)
    : atoms_(std::move(atoms)), pieces_(std::move(pieces)) {
  for (const auto& at : atoms_) {
    if (!(at.s > 0.0) || !std::isfinite(at.s)) throw DomainError("atom location must be positive and finite");
    if (!std::isfinite(at.w)) throw DomainError("atom weight must be finite");
  }
  for (const auto& p : pieces_) {
    if (!(p.a >= 0.0) || !(p.b > p.a) || std::isinf(p.a)) {
      throw DomainError("density interval must satisfy 0 <= a < b");
    }
  }
  std::sort(atoms_.begin(), atoms_.end(), [](const Atom& x, const Atom& y) { return x.s < y.s; });
  std::stable_sort(pieces_.begin(), pieces_.end(),
                   [](const DensityPiece& x, const DensityPiece& y) { return x.a < y.a; });
  for (size_t i = 1; i < pieces_.size(); ++i) {
    if (pieces_[i].a < pieces_[i - 1].b) throw DomainError("density intervals must be pairwise disjoint");
  }
}

Measure Measure::atom(double s, double w) { return Measure({{s, w}}, {}); }

Measure Measure::density(SmoothDensity w, double a, double b) { return Measure({}, {{a, b, std::move(w)}}); }

int Measure::max_order() const {
  int J = INT_MAX;
  for (const auto& p : pieces_) J = std::min(J, p.density.max_order());
  return J;
}

Provenance Measure::provenance() const {
  Provenance out = Provenance::closed_form;
  for (const auto& p : pieces_)
    if (static_cast<int>(p.density.provenance()) > static_cast<int>(out)) out = p.density.provenance();
  return out;
}

std::vector<double> Measure::breakpoints() const {
  std::vector<double> out;
  for (const auto& at : atoms_) out.push_back(at.s);
  for (const auto& p : pieces_) {
    if (p.a > 0.0) out.push_back(p.a);
    if (std::isfinite(p.b)) out.push_back(p.b);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double Measure::density_at(int j, double s) const {
  double sum = 0.0;
  for (const auto& p : pieces_)
    if (s > p.a && s < p.b) sum += p.density.eval(j, s);
  return sum;
}

Measure Measure::operator+(const Measure& other) const {
  std::vector<Atom> atoms = atoms_;
  atoms.insert(atoms.end(), other.atoms_.begin(), other.atoms_.end());
  std::vector<DensityPiece> pieces = pieces_;
  pieces.insert(pieces.end(), other.pieces_.begin(), other.pieces_.end());
  return Measure(std::move(atoms), std::move(pieces));
}

Measure Measure::scaled(double c) const { return power_weighted(0.0, c); }

Measure Measure::power_weighted(double q, double coef) const {
  std::vector<Atom> atoms;
  for (const auto& at : atoms_) atoms.push_back({at.s, coef * std::pow(at.s, q) * at.w});
  std::vector<DensityPiece> pieces;
  for (const auto& p : pieces_) {
    pieces.push_back({p.a, p.b, q == 0.0 ? p.density.scaled(coef) : p.density.power_weighted(q, coef)});
  }
  return Measure(std::move(atoms), std::move(pieces));
}

std::string Measure::describe() const {
  std::ostringstream os;
  os.precision(12);
  bool first = true;
  for (const auto& at : atoms_) {
    os << (first ? "" : " + ") << at.w << "*delta(" << at.s << ")";
    first = false;
  }
  for (const auto& p : pieces_) {
    os << (first ? "" : " + ") << "[" << p.density.describe() << "] on (" << p.a << ", " << p.b << ")";
    first = false;
  }
  return first ? "0" : os.str();
}

ScanGrid ScanGrid::log_spaced(double lo, double hi, int n, double tolerance) {
  if (!(lo > 0.0) || !(hi >= lo) || n < 1) throw DomainError("grid needs 0 < min <= max and at least one point");
  ScanGrid g;
  g.tolerance = tolerance;
  if (n == 1 || hi == lo) {
    g.points.push_back(lo);
    return g;
  }
  const double l0 = std::log(lo), l1 = std::log(hi);
  for (int i = 0; i < n; ++i) g.points.push_back(std::exp(l0 + (l1 - l0) * i / (n - 1)));
  g.points.front() = lo;
  g.points.back() = hi;
  return g;
}

void ScanGrid::validate() const {
  if (points.empty()) throw DomainError("grid is empty");
  for (size_t i = 0; i < points.size(); ++i) {
    if (!(points[i] > 0.0) || !std::isfinite(points[i])) throw DomainError("grid points must be positive");
    if (i > 0 && !(points[i] > points[i - 1])) throw DomainError("grid points must be strictly increasing");
  }
  if (!(tolerance >= 0.0)) throw DomainError("grid tolerance must be non-negative");
}

quad::RangeResult integrate_against(const Measure& mu, const std::function<double(double)>& g,
                                    const MeasureIntegral& spec) {
  quad::RangeResult out;
  for (const auto& at : mu.atoms()) {
    if (at.s > spec.from && at.s <= spec.to && at.w != 0.0) out.value += at.w * g(at.s);
  }
  for (size_t i = 0; i < mu.pieces().size(); ++i) {
    const auto& piece = mu.pieces()[i];
    const double a = std::max(piece.a, spec.from);
    const double b = std::min(piece.b, spec.to);
    if (!(b > a)) continue;
    const SmoothDensity& w = piece.density;
    quad::Integrand integrand = [&g, &w](double s) {
      const double gv = g(s);
      return gv == 0.0 ? 0.0 : gv * w(s);
    };
    quad::RangeSpec range;
    range.a = a;
    range.b = b;
    range.exponent_at_zero = spec.exponent_at_zero + w.zero_exponent();
    range.breakpoints = spec.breakpoints;
    range.probe_divergence = spec.probe_divergence;
    quad::Options opts = spec.quad;
    if (w.provenance() == Provenance::finite_difference) opts.rel_tol = std::max(opts.rel_tol, kFiniteDifferenceRelTol);
    const auto r = quad::integrate_range(integrand, range, opts);
    out.value += r.value;
    out.error += r.error;
    if (r.status != quad::Status::ok && out.status != quad::Status::divergent) {
      out.status = r.status;
      out.diagnostics = "density piece " + std::to_string(i) + ": " + r.diagnostics;
    }
  }
  if (out.status == quad::Status::divergent) out.value = std::numeric_limits<double>::infinity();
  return out;
}

double moment(const Measure& mu, int k) {
  if (k < 0) throw DomainError("moment order must be non-negative");
  MeasureIntegral spec;
  spec.exponent_at_zero = k;
  spec.probe_divergence = true;
  const auto r = integrate_against(mu, [k](double s) { return std::pow(s, k); }, spec);
  if (r.status == quad::Status::not_converged)
    throw QuadratureError("moment " + std::to_string(k) + ": " + r.diagnostics);
  return r.value;
}

Measure derived_measure(const Measure& mu, int k) {
  if (k < 0) throw DomainError("derived_measure: k must be non-negative");
  if (k == 0) return mu;
  if (mu.has_atoms()) {
    throw NotAMeasureError("the distributional derivative of an atom is not a measure (atom at s=" +
                           std::to_string(mu.atoms().front().s) + ")");
  }
  std::vector<DensityPiece> pieces;
  for (const auto& p : mu.pieces()) pieces.push_back({p.a, p.b, p.density.derived(k)});

  // Jumps of w^{(i)} at interior boundaries contribute delta^{(k-1-i)} terms to d^k mu.
  std::vector<Atom> atoms;
  for (double p : mu.breakpoints()) {
    std::vector<double> jump(k, 0.0);
    std::vector<double> scale(k, 0.0);
    for (const auto& piece : mu.pieces()) {
      const double sign = piece.a == p ? 1.0 : piece.b == p ? -1.0 : 0.0;
      if (sign == 0.0) continue;
      for (int i = 0; i < k; ++i) {
        const double v = piece.density.eval(i, p);
        jump[i] += sign * v;
        scale[i] += std::abs(v);
      }
    }
    for (int i = 0; i < k; ++i) {
      if (std::abs(jump[i]) <= 1e-9 * (1.0 + scale[i])) continue;
      if (i < k - 1) {
        throw NotAMeasureError("density derivative of order " + std::to_string(i) + " jumps at s=" + std::to_string(p) +
                               "; the order-" + std::to_string(k) + " derived object is not a measure");
      }
      atoms.push_back({p, (k % 2 ? -1.0 : 1.0) * std::pow(p, k) * jump[i]});
    }
  }
  return Measure(std::move(atoms), std::move(pieces));
}

PositivityReport positivity_scan(const Measure& mu, const ScanGrid& grid) {
  PositivityReport rep;
  if (mu.empty()) {
    rep.verdict = Verdict::pass;
    rep.note = "zero measure";
    return rep;
  }
  bool any = false;
  auto consider = [&](double value, double at) {
    if (!any || value < rep.min_value) {
      rep.min_value = value;
      rep.witness = at;
    }
    any = true;
    ++rep.points_checked;
  };
  for (const auto& at : mu.atoms()) consider(at.w, at.s);
  for (const auto& piece : mu.pieces()) {
    for (double s : grid.points) {
      if (s > piece.a && s < piece.b) consider(piece.density(s), s);
    }
  }
  if (!any) {
    rep.verdict = Verdict::inconclusive;
    rep.note = "grid does not meet the support";
    return rep;
  }
  if (!std::isfinite(rep.min_value)) {
    rep.verdict = Verdict::inconclusive;
    rep.note = "non-finite density value";
    return rep;
  }
  rep.verdict = rep.min_value >= -grid.tolerance ? Verdict::pass : Verdict::fail;
  return rep;
}

double tail_power_integral(const Measure& mu, double lam, double u) {
  if (!(u > 0.0)) throw DomainError("tail_power_integral: u must be positive");
  MeasureIntegral spec;
  spec.from = u;
  const auto r = integrate_against(mu, [lam](double s) { return std::pow(s, -lam); }, spec);
  if (r.status == quad::Status::not_converged) throw QuadratureError("tail integral: " + r.diagnostics);
  return r.value;
}

Admissibility levy_admissibility(const Measure& mu, double lam) {
  if (!(lam > 0.0)) throw DomainError("lambda must be positive");
  Admissibility out;
  MeasureIntegral near;
  near.to = 1.0;
  near.probe_divergence = true;
  const auto r0 = integrate_against(mu, [](double) { return 1.0; }, near);
  MeasureIntegral far;
  far.from = 1.0;
  far.probe_divergence = true;
  const auto r1 = integrate_against(mu, [lam](double t) { return std::pow(t, -lam); }, far);
  out.mass_near_zero = r0.value;
  out.tail = r1.value;
  const bool ok0 = r0.status == quad::Status::ok && std::isfinite(r0.value);
  const bool ok1 = r1.status == quad::Status::ok && std::isfinite(r1.value);
  out.admissible = ok0 && ok1;
  std::ostringstream os;
  os.precision(12);
  os << "int_(0,1] dmu = " << r0.value << (ok0 ? "" : " (not finite: mu must be integrable at 0)")
     << "; int_(1,inf) t^-lambda dmu = " << r1.value << (ok1 ? "" : " (not finite)");
  out.diagnostics = os.str();
  return out;
}

Measure image_reciprocal(const Measure& mu) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<Atom> atoms;
  for (const auto& at : mu.atoms()) atoms.push_back({1.0 / at.s, at.w});
  std::vector<DensityPiece> pieces;
  for (const auto& p : mu.pieces()) {
    pieces.push_back({std::isinf(p.b) ? 0.0 : 1.0 / p.b, p.a == 0.0 ? inf : 1.0 / p.a, p.density.reciprocal_image()});
  }
  return Measure(std::move(atoms), std::move(pieces));
}

}  // namespace gsf
