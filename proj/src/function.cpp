#include "gsf/function.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gsf/error.hpp"
#include "gsf/specfun.hpp"

namespace gsf {

using specfun::pochhammer;

const char* to_string(Representation r) {
  switch (r) {
    case Representation::closed_form:
      return "closed_form";
    case Representation::stieltjes:
      return "stieltjes";
    case Representation::laplace:
      return "laplace";
    case Representation::none:
      return "none";
  }
  return "unknown";
}

namespace {

double sign_of(int n) { return n % 2 ? -1.0 : 1.0; }

void raise_on(const quad::RangeResult& r, const std::string& component) {
  if (r.status == quad::Status::divergent) throw DivergenceError(component, r.diagnostics);
  if (r.status == quad::Status::not_converged) throw QuadratureError(component + ": " + r.diagnostics);
}

// Gamma(lam)^{-1} int (-t)^j e^{-st} w(t) dt over the density pieces of nu.
class PhiModel final : public DensityModel {
 public:
  PhiModel(Measure nu, double lam) : nu_(std::move(nu)), inv_gamma_(1.0 / std::tgamma(lam)) {}
  double eval(int j, double s) const override {
    MeasureIntegral spec;
    spec.exponent_at_zero = j;
    spec.breakpoints = {1.0 / s};
    auto r = integrate_against(nu_, [j, s](double t) { return sign_of(j) * std::exp(-s * t + j * std::log(t)); }, spec);
    raise_on(r, "stieltjes-to-laplace bridge");
    return inv_gamma_ * r.value;
  }
  int max_order() const override { return GSFunction::kQuadratureCap; }
  Provenance provenance() const override { return Provenance::quadrature; }
  std::string describe() const override { return "phi[" + nu_.describe() + "]"; }

 private:
  Measure nu_;
  double inv_gamma_;
};

}  // namespace

double stieltjes_to_laplace_phi(const Measure& nu, double lam, double s) {
  if (!(s > 0.0)) throw DomainError("stieltjes_to_laplace_phi: s must be positive");
  specfun::GammaArg check(lam);
  return stieltjes_to_laplace_measure(nu, lam).density_at(0, s);
}

Measure stieltjes_to_laplace_measure(const Measure& nu, double lam) {
  const double g = std::tgamma(lam);
  std::vector<std::pair<double, SmoothDensity>> terms;
  for (const auto& at : nu.atoms()) terms.push_back({at.w / g, SmoothDensity::exponential(1.0, 0.0, at.s)});
  if (nu.has_density()) {
    Measure dens({}, nu.pieces());
    terms.push_back({1.0, SmoothDensity(std::make_shared<PhiModel>(std::move(dens), lam))});
  }
  if (terms.empty()) return Measure();
  return Measure::density(SmoothDensity::linear_combination(terms));
}

GSFunction::GSFunction(Parts parts) {
  specfun::GammaArg check(parts.lam);
  lam_ = parts.lam;
  if (parts.c != 0.0) power_.push_back({parts.c, 0.0});
  if (parts.zero_atom != 0.0) power_.push_back({parts.zero_atom, lam_});
  for (auto term : parts.closed_form) {
    switch (term.kind) {
      case ClosedFormTerm::Kind::constant:
        if (term.coef != 0.0) power_.push_back({term.coef, 0.0});
        break;
      case ClosedFormTerm::Kind::power_kernel:
        if (!(term.p > 0.0)) throw DomainError("power_kernel exponent must be positive");
        if (!(term.t >= 0.0)) throw DomainError("power_kernel location must be non-negative");
        if (term.t == 0.0) {
          power_.push_back({term.coef, term.p});
        } else {
          closed_.push_back(term);
        }
        break;
      case ClosedFormTerm::Kind::exponential:
        if (!(term.t > 0.0)) throw DomainError("exponential term location must be positive");
        if (std::isnan(term.p)) term.p = lam_ - 1.0;
        closed_.push_back(term);
        break;
    }
  }
  // Merge equal exponents so c and zero_atom stay single terms.
  std::vector<PowerTerm> merged;
  for (const auto& t : power_) {
    auto it = std::find_if(merged.begin(), merged.end(), [&](const PowerTerm& m) { return m.p == t.p; });
    if (it == merged.end()) {
      merged.push_back(t);
    } else {
      it->coef += t.coef;
    }
  }
  power_ = std::move(merged);
  if (parts.stieltjes) {
    nu_ = std::move(parts.stieltjes);
    nu_lam_ = lam_;
  }
  if (parts.laplace) {
    mu_ = std::move(parts.laplace);
    mu_lam_ = lam_;
  }
}

GSFunction GSFunction::laplace(double lam, Measure mu, double c, double zero_atom) {
  Parts p;
  p.lam = lam;
  p.c = c;
  p.zero_atom = zero_atom;
  p.laplace = std::move(mu);
  return GSFunction(std::move(p));
}

GSFunction GSFunction::stieltjes(double lam, Measure nu, double c, double zero_atom) {
  Parts p;
  p.lam = lam;
  p.c = c;
  p.zero_atom = zero_atom;
  p.stieltjes = std::move(nu);
  return GSFunction(std::move(p));
}

GSFunction GSFunction::closed(double lam, std::vector<ClosedFormTerm> terms, double c, double zero_atom) {
  Parts p;
  p.lam = lam;
  p.c = c;
  p.zero_atom = zero_atom;
  p.closed_form = std::move(terms);
  return GSFunction(std::move(p));
}

Representation GSFunction::preferred() const noexcept {
  if (!closed_.empty()) return Representation::closed_form;
  if (nu_ && !nu_->empty()) return Representation::stieltjes;
  if (mu_ && !mu_->empty()) return Representation::laplace;
  return Representation::none;
}

int GSFunction::derivative_cap() const {
  switch (preferred()) {
    case Representation::stieltjes:
      return nu_->has_density() ? kQuadratureCap : kClosedFormCap;
    case Representation::laplace:
      return mu_->has_density() ? kQuadratureCap : kClosedFormCap;
    default:
      return kClosedFormCap;
  }
}

double GSFunction::closed_derivative(int n, double x) const {
  double sum = 0.0;
  for (const auto& term : closed_) {
    if (term.kind == ClosedFormTerm::Kind::power_kernel) {
      sum += term.coef * sign_of(n) * pochhammer(term.p, n) * std::pow(x + term.t, -term.p - n);
    } else {
      sum += term.coef * sign_of(n) * std::exp(-x * term.t + (n + term.p) * std::log(term.t));
    }
  }
  return sum;
}

double GSFunction::stieltjes_derivative(int n, double x) const {
  const double a = nu_lam_ + n;
  double sum = 0.0;
  for (const auto& at : nu_->atoms()) sum += at.w * std::pow(x + at.s, -a);
  if (nu_->has_density()) {
    MeasureIntegral spec;
    spec.breakpoints = {x};
    auto r = integrate_against(Measure({}, nu_->pieces()), [x, a](double t) { return std::pow(x + t, -a); }, spec);
    raise_on(r, "stieltjes measure");
    sum += r.value;
  }
  return sign_of(n) * pochhammer(nu_lam_, n) * sum;
}

double GSFunction::laplace_derivative(int n, double x) const {
  const double e = n + mu_lam_ - 1.0;
  auto kernel = [x, e](double s) { return std::exp(-x * s + e * std::log(s)); };
  double sum = 0.0;
  for (const auto& at : mu_->atoms()) sum += at.w * kernel(at.s);
  if (mu_->has_density()) {
    MeasureIntegral spec;
    spec.exponent_at_zero = e;
    spec.breakpoints = {std::max(e, 1.0) / x};
    auto r = integrate_against(Measure({}, mu_->pieces()), kernel, spec);
    raise_on(r, "laplace measure");
    sum += r.value;
  }
  return sign_of(n) * sum;
}

double GSFunction::integral_derivative(int n, double x) const {
  if (!(x > 0.0)) throw DomainError("evaluation point must be positive");
  if (n < 0) throw DomainError("derivative order must be non-negative");
  if (n > derivative_cap()) {
    throw CapabilityError("derivative order " + std::to_string(n) + " exceeds the cap " +
                          std::to_string(derivative_cap()) + " for this representation");
  }
  switch (preferred()) {
    case Representation::closed_form:
      return closed_derivative(n, x);
    case Representation::stieltjes:
      return stieltjes_derivative(n, x);
    case Representation::laplace:
      return laplace_derivative(n, x);
    case Representation::none:
      return 0.0;
  }
  return 0.0;
}

std::vector<double> GSFunction::integral_derivatives(int max_n, double x) const {
  std::vector<double> out(max_n + 1);
  for (int n = 0; n <= max_n; ++n) out[n] = integral_derivative(n, x);
  return out;
}

double GSFunction::derivative(int n, double x) const {
  double sum = integral_derivative(n, x);
  for (const auto& t : power_) sum += t.coef * sign_of(n) * pochhammer(t.p, n) * std::pow(x, -t.p - n);
  return sum;
}

std::vector<double> GSFunction::derivatives(int max_n, double x) const {
  std::vector<double> out(max_n + 1);
  for (int n = 0; n <= max_n; ++n) out[n] = derivative(n, x);
  return out;
}

Measure GSFunction::laplace_measure() const {
  if (mu_) return mu_lam_ == lam_ ? *mu_ : mu_->power_weighted(mu_lam_ - lam_);
  if (nu_) {
    Measure m = stieltjes_to_laplace_measure(*nu_, nu_lam_);
    return nu_lam_ == lam_ ? m : m.power_weighted(nu_lam_ - lam_);
  }
  std::vector<Atom> atoms;
  std::vector<std::pair<double, SmoothDensity>> dens;
  for (const auto& term : closed_) {
    if (term.kind == ClosedFormTerm::Kind::power_kernel) {
      dens.push_back({term.coef / std::tgamma(term.p), SmoothDensity::exponential(1.0, term.p - lam_, term.t)});
    } else {
      atoms.push_back({term.t, term.coef * std::pow(term.t, term.p - lam_ + 1.0)});
    }
  }
  std::vector<DensityPiece> pieces;
  if (!dens.empty()) {
    pieces.push_back({0.0, std::numeric_limits<double>::infinity(), SmoothDensity::linear_combination(dens)});
  }
  return Measure(std::move(atoms), std::move(pieces));
}

GSFunction GSFunction::with_order(double lam2) const {
  specfun::GammaArg check(lam2);
  GSFunction out = *this;
  out.lam_ = lam2;
  return out;
}

GSFunction GSFunction::without_power_terms() const {
  GSFunction out = *this;
  out.power_.clear();
  return out;
}

double GSFunction::representation_gap(const std::vector<double>& xs) const {
  std::vector<std::function<double(double)>> reps;
  if (!closed_.empty()) reps.push_back([this](double x) { return closed_derivative(0, x); });
  if (nu_) reps.push_back([this](double x) { return stieltjes_derivative(0, x); });
  if (mu_) reps.push_back([this](double x) { return laplace_derivative(0, x); });
  double gap = 0.0;
  for (double x : xs) {
    std::vector<double> v;
    for (auto& r : reps) v.push_back(r(x));
    for (size_t i = 1; i < v.size(); ++i) gap = std::max(gap, std::abs(v[i] - v[0]) / std::max(1.0, std::abs(v[0])));
  }
  return gap;
}

std::string GSFunction::describe() const {
  std::ostringstream os;
  os.precision(12);
  os << "lambda=" << lam_;
  for (const auto& t : power_) os << " + " << t.coef << "*x^-" << t.p;
  for (const auto& t : closed_) {
    if (t.kind == ClosedFormTerm::Kind::power_kernel) {
      os << " + " << t.coef << "*(x+" << t.t << ")^-" << t.p;
    } else {
      os << " + " << t.coef << "*" << t.t << "^" << t.p << "*exp(-" << t.t << "x)";
    }
  }
  if (nu_) os << " + stieltjes(order " << nu_lam_ << ")[" << nu_->describe() << "]";
  if (mu_) os << " + laplace(order " << mu_lam_ << ")[" << mu_->describe() << "]";
  return os.str();
}

Differentiable as_differentiable(const GSFunction& f) {
  Differentiable d;
  d.label = f.describe();
  d.max_order = f.derivative_cap();
  d.derivatives = [f](int n, double x) { return f.derivatives(n, x); };
  return d;
}

}  // namespace gsf
