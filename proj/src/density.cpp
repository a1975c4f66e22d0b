#include "gsf/density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "gsf/error.hpp"
#include "gsf/expr.hpp"
#include "gsf/specfun.hpp"

namespace gsf {

using specfun::binomial;
using specfun::falling_factorial;

const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::closed_form:
      return "closed_form";
    case Provenance::quadrature:
      return "quadrature";
    case Provenance::finite_difference:
      return "finite_difference";
  }
  return "unknown";
}

namespace {

bool is_nonneg_integer(double p) { return p >= 0 && std::floor(p) == p; }

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

class ExponentialModel final : public DensityModel {
 public:
  ExponentialModel(double A, double p, double b, int J) : A_(A), p_(p), b_(b), J_(J) {}

  double eval(int j, double s) const override {
    double sum = 0.0;
    const double log_s = std::log(s);
    for (int i = 0; i <= j; ++i) {
      if (is_nonneg_integer(p_) && i > p_) break;
      const double coeff = binomial(j, i) * falling_factorial(p_, i) * std::pow(-b_, j - i);
      if (coeff == 0.0) continue;
      sum += coeff * std::exp(-b_ * s + (p_ - i) * log_s);
    }
    return A_ * sum;
  }
  int max_order() const override { return J_; }
  Provenance provenance() const override { return Provenance::closed_form; }
  double zero_exponent() const override { return std::min(0.0, p_); }
  std::string describe() const override { return fmt(A_) + "*s^" + fmt(p_) + "*exp(-" + fmt(b_) + "*s)"; }

 private:
  double A_, p_, b_;
  int J_;
};

class PowerLawModel final : public DensityModel {
 public:
  PowerLawModel(double A, double p, int J) : A_(A), p_(p), J_(J) {}
  double eval(int j, double s) const override {
    if (is_nonneg_integer(p_) && j > p_) return 0.0;
    return A_ * falling_factorial(p_, j) * std::pow(s, p_ - j);
  }
  int max_order() const override { return J_; }
  Provenance provenance() const override { return Provenance::closed_form; }
  double zero_exponent() const override { return std::min(0.0, p_); }
  std::string describe() const override { return fmt(A_) + "*s^" + fmt(p_); }

 private:
  double A_, p_;
  int J_;
};

double poly_derivative(const std::vector<double>& c, int i, double s) {
  double acc = 0.0;
  for (int m = static_cast<int>(c.size()) - 1; m >= i; --m) {
    acc = acc * s + c[m] * falling_factorial(m, i);
  }
  return acc;
}

int lowest_nonzero(const std::vector<double>& c) {
  for (size_t i = 0; i < c.size(); ++i)
    if (c[i] != 0.0) return static_cast<int>(i);
  return 0;
}

class RationalModel final : public DensityModel {
 public:
  RationalModel(std::vector<double> num, std::vector<double> den, int J)
      : num_(std::move(num)), den_(std::move(den)), J_(J) {}

  // Differentiating Q w = P j times: Q w^{(j)} = P^{(j)} - sum_{i>=1} C(j,i) Q^{(i)} w^{(j-i)}.
  double eval(int j, double s) const override {
    const double q0 = poly_derivative(den_, 0, s);
    std::vector<double> w(j + 1);
    for (int m = 0; m <= j; ++m) {
      double rhs = poly_derivative(num_, m, s);
      for (int i = 1; i <= m; ++i) rhs -= binomial(m, i) * poly_derivative(den_, i, s) * w[m - i];
      w[m] = rhs / q0;
    }
    return w[j];
  }
  int max_order() const override { return J_; }
  Provenance provenance() const override { return Provenance::closed_form; }
  double zero_exponent() const override { return std::min(0, lowest_nonzero(num_) - lowest_nonzero(den_)); }
  std::string describe() const override {
    std::string out = "rational(num=[";
    for (size_t i = 0; i < num_.size(); ++i) out += (i ? "," : "") + fmt(num_[i]);
    out += "], den=[";
    for (size_t i = 0; i < den_.size(); ++i) out += (i ? "," : "") + fmt(den_[i]);
    return out + "])";
  }

 private:
  std::vector<double> num_, den_;
  int J_;
};

class FiniteDifferenceModel final : public DensityModel {
 public:
  FiniteDifferenceModel(std::function<double(double)> fn, int J, std::string label, double zero_exp)
      : fn_(std::move(fn)), J_(J), label_(std::move(label)), zero_exp_(zero_exp) {}
  // Densities regular at 0 are differenced on the unit scale near the origin.
  double eval(int j, double s) const override { return central_derivative(fn_, j, s, zero_exp_ == 0.0 ? 1.0 : 0.0); }
  int max_order() const override { return J_; }
  Provenance provenance() const override { return Provenance::finite_difference; }
  double zero_exponent() const override { return std::min(0.0, zero_exp_); }
  std::string describe() const override { return label_; }

 private:
  std::function<double(double)> fn_;
  int J_;
  std::string label_;
  double zero_exp_;
};

class CallbackModel final : public DensityModel {
 public:
  CallbackModel(std::function<double(int, double)> fn, int J, Provenance prov, std::string label, double zero_exp)
      : fn_(std::move(fn)), J_(J), prov_(prov), label_(std::move(label)), zero_exp_(zero_exp) {}
  double eval(int j, double s) const override { return fn_(j, s); }
  int max_order() const override { return J_; }
  Provenance provenance() const override { return prov_; }
  double zero_exponent() const override { return std::min(0.0, zero_exp_); }
  std::string describe() const override { return label_; }

 private:
  std::function<double(int, double)> fn_;
  int J_;
  Provenance prov_;
  std::string label_;
  double zero_exp_;
};

Provenance worst(Provenance a, Provenance b) { return static_cast<int>(a) > static_cast<int>(b) ? a : b; }

class LinearCombinationModel final : public DensityModel {
 public:
  explicit LinearCombinationModel(std::vector<std::pair<double, SmoothDensity>> terms) : terms_(std::move(terms)) {}
  double eval(int j, double s) const override {
    double sum = 0.0;
    for (const auto& [c, d] : terms_)
      if (c != 0.0) sum += c * d.eval(j, s);
    return sum;
  }
  int max_order() const override {
    int J = std::numeric_limits<int>::max();
    for (const auto& t : terms_) J = std::min(J, t.second.max_order());
    return terms_.empty() ? SmoothDensity::kClosedFormOrder : J;
  }
  Provenance provenance() const override {
    Provenance p = Provenance::closed_form;
    for (const auto& t : terms_) p = worst(p, t.second.provenance());
    return p;
  }
  double zero_exponent() const override {
    double e = 0.0;
    for (const auto& t : terms_) e = std::min(e, t.second.zero_exponent());
    return e;
  }
  std::string describe() const override {
    if (terms_.empty()) return "0";
    std::string out;
    for (size_t i = 0; i < terms_.size(); ++i) {
      out += (i ? " + " : "") + fmt(terms_[i].first) + "*(" + terms_[i].second.describe() + ")";
    }
    return out;
  }

 private:
  std::vector<std::pair<double, SmoothDensity>> terms_;
};

// v(s) = (-1)^k s^k w^{(k)}(s); v^{(j)} by Leibniz on s^k * w^{(k)}.
class DerivedModel final : public DensityModel {
 public:
  DerivedModel(SmoothDensity base, int k) : base_(std::move(base)), k_(k) {}
  double eval(int j, double s) const override {
    double sum = 0.0;
    for (int i = 0; i <= std::min(j, k_); ++i) {
      sum += binomial(j, i) * falling_factorial(k_, i) * std::pow(s, k_ - i) * base_.eval(k_ + j - i, s);
    }
    return (k_ % 2 ? -1.0 : 1.0) * sum;
  }
  int max_order() const override { return base_.max_order() - k_; }
  Provenance provenance() const override { return base_.provenance(); }
  double zero_exponent() const override { return std::min(0.0, base_.zero_exponent()); }
  std::string describe() const override {
    return "(-1)^" + std::to_string(k_) + " s^" + std::to_string(k_) + " d^" + std::to_string(k_) + "[" +
           base_.describe() + "]";
  }

 private:
  SmoothDensity base_;
  int k_;
};

class PowerWeightedModel final : public DensityModel {
 public:
  PowerWeightedModel(SmoothDensity base, double q, double coef) : base_(std::move(base)), q_(q), coef_(coef) {}
  double eval(int j, double s) const override {
    double sum = 0.0;
    for (int i = 0; i <= j; ++i) {
      if (is_nonneg_integer(q_) && i > q_) break;
      sum += binomial(j, i) * falling_factorial(q_, i) * std::pow(s, q_ - i) * base_.eval(j - i, s);
    }
    return coef_ * sum;
  }
  int max_order() const override { return base_.max_order(); }
  Provenance provenance() const override { return base_.provenance(); }
  double zero_exponent() const override { return std::min(0.0, base_.zero_exponent() + q_); }
  std::string describe() const override { return fmt(coef_) + "*s^" + fmt(q_) + "*(" + base_.describe() + ")"; }

 private:
  SmoothDensity base_;
  double q_, coef_;
};

// u(t) = t^{-2} r(t), r(t) = w(1/t);
// r^{(n)}(t) = (-1)^n sum_{m=1}^n L(n,m) t^{-n-m} w^{(m)}(1/t) with unsigned Lah numbers L.
class ReciprocalModel final : public DensityModel {
 public:
  explicit ReciprocalModel(SmoothDensity base) : base_(std::move(base)) {}
  double eval(int j, double t) const override {
    const double inv = 1.0 / t;
    std::vector<double> r(j + 1);
    r[0] = base_.eval(0, inv);
    for (int n = 1; n <= j; ++n) {
      double acc = 0.0;
      for (int m = 1; m <= n; ++m) {
        const double lah = binomial(n - 1, m - 1) * specfun::factorial(n) / specfun::factorial(m);
        acc += lah * std::pow(t, -n - m) * base_.eval(m, inv);
      }
      r[n] = (n % 2 ? -1.0 : 1.0) * acc;
    }
    double sum = 0.0;
    for (int i = 0; i <= j; ++i) sum += binomial(j, i) * falling_factorial(-2.0, i) * std::pow(t, -2.0 - i) * r[j - i];
    return sum;
  }
  int max_order() const override { return base_.max_order(); }
  Provenance provenance() const override { return base_.provenance(); }
  std::string describe() const override { return "reciprocal_image[" + base_.describe() + "]"; }

 private:
  SmoothDensity base_;
};

}  // namespace

double central_derivative(const std::function<double(double)>& fn, int j, double s, double scale_floor) {
  if (j == 0) return fn(s);
  if (j > SmoothDensity::kFiniteDifferenceCap) {
    throw CapabilityError("finite-difference derivatives are capped at order " +
                          std::to_string(SmoothDensity::kFiniteDifferenceCap));
  }
  const double c = std::pow(std::numeric_limits<double>::epsilon(), 1.0 / (j + 4));
  const double a = std::max(std::abs(s), 1e-300);
  const double h = std::min(c * std::max(a, scale_floor), a / (j + 1));
  auto stencil = [&](double step) {
    double sum = 0.0;
    for (int i = 0; i <= j; ++i) {
      sum += (i % 2 ? -1.0 : 1.0) * binomial(j, i) * fn(s + (0.5 * j - i) * step);
    }
    return sum / std::pow(step, j);
  };
  const double coarse = stencil(h);
  const double fine = stencil(0.5 * h);
  return (4.0 * fine - coarse) / 3.0;
}

SmoothDensity::SmoothDensity(std::shared_ptr<const DensityModel> model) : model_(std::move(model)) {}

double SmoothDensity::eval(int j, double s) const {
  if (j < 0 || j > model_->max_order()) {
    throw CapabilityError("density '" + model_->describe() + "' supports derivatives up to order " +
                          std::to_string(model_->max_order()) + ", requested " + std::to_string(j));
  }
  return model_->eval(j, s);
}

SmoothDensity SmoothDensity::exponential(double A, double p, double b, int max_order) {
  return SmoothDensity(std::make_shared<ExponentialModel>(A, p, b, max_order));
}

SmoothDensity SmoothDensity::power_law(double A, double p, int max_order) {
  return SmoothDensity(std::make_shared<PowerLawModel>(A, p, max_order));
}

SmoothDensity SmoothDensity::rational(std::vector<double> num, std::vector<double> den, int max_order) {
  if (den.empty() || std::all_of(den.begin(), den.end(), [](double v) { return v == 0.0; })) {
    throw DomainError("rational density: denominator must be a nonzero polynomial");
  }
  if (num.empty()) num.push_back(0.0);
  return SmoothDensity(std::make_shared<RationalModel>(std::move(num), std::move(den), max_order));
}

SmoothDensity SmoothDensity::expression(const std::string& text, int max_order, double zero_exponent) {
  Expression e(text);
  return finite_difference([e](double s) { return e(s); }, max_order, "expr(" + text + ")", zero_exponent);
}

SmoothDensity SmoothDensity::finite_difference(std::function<double(double)> fn, int max_order, std::string label,
                                               double zero_exponent) {
  if (max_order > kFiniteDifferenceCap) {
    throw CapabilityError("finite-difference densities support max_order <= " + std::to_string(kFiniteDifferenceCap));
  }
  return SmoothDensity(
      std::make_shared<FiniteDifferenceModel>(std::move(fn), max_order, std::move(label), zero_exponent));
}

SmoothDensity SmoothDensity::from_derivatives(std::function<double(int, double)> fn, int max_order,
                                              Provenance provenance, std::string label, double zero_exponent) {
  return SmoothDensity(
      std::make_shared<CallbackModel>(std::move(fn), max_order, provenance, std::move(label), zero_exponent));
}

SmoothDensity SmoothDensity::linear_combination(const std::vector<std::pair<double, SmoothDensity>>& terms) {
  return SmoothDensity(std::make_shared<LinearCombinationModel>(terms));
}

SmoothDensity SmoothDensity::derived(int k) const {
  if (k < 0) throw DomainError("derived density: negative order");
  if (k == 0) return *this;
  if (k > max_order()) {
    throw CapabilityError("density '" + describe() + "' has max_order " + std::to_string(max_order()) +
                          ", cannot form the order-" + std::to_string(k) + " derived density");
  }
  return SmoothDensity(std::make_shared<DerivedModel>(*this, k));
}

SmoothDensity SmoothDensity::power_weighted(double q, double coef) const {
  return SmoothDensity(std::make_shared<PowerWeightedModel>(*this, q, coef));
}

SmoothDensity SmoothDensity::reciprocal_image() const {
  return SmoothDensity(std::make_shared<ReciprocalModel>(*this));
}

}  // namespace gsf
