#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gsf/measure.hpp"

namespace gsf {

// coef * x^{-p}. The constant c is p = 0, the zero atom is p = lambda.
struct PowerTerm {
  double coef = 0.0;
  double p = 0.0;
};

struct ClosedFormTerm {
  enum class Kind { power_kernel, exponential, constant };
  Kind kind = Kind::constant;
  double coef = 1.0;
  double t = 0.0;  // kernel location
  // power_kernel: exponent p in (x+t)^{-p}; exponential: q in t^q e^{-xt}
  // (NaN means lambda - 1).
  double p = std::numeric_limits<double>::quiet_NaN();

  static ClosedFormTerm power_kernel(double coef, double t, double p) { return {Kind::power_kernel, coef, t, p}; }
  static ClosedFormTerm exponential(double coef, double t, double q = std::numeric_limits<double>::quiet_NaN()) {
    return {Kind::exponential, coef, t, q};
  }
  static ClosedFormTerm constant(double coef) { return {Kind::constant, coef, 0.0, 0.0}; }
};

enum class Representation { closed_form, stieltjes, laplace, none };
const char* to_string(Representation r);

// f(x) = sum of power terms + I(x), where I is given by closed-form terms, a
// Stieltjes-side measure nu (kernel (x+t)^{-lam}) or a Laplace-side measure
// mu (kernel e^{-xs} s^{lam-1}). Evaluation prefers closed form, then nu,
// then mu; the Laplace measure is the canonical form for measure calculus.
class GSFunction {
 public:
  static constexpr int kQuadratureCap = 12;
  static constexpr int kClosedFormCap = 30;

  struct Parts {
    double lam = 1.0;
    double c = 0.0;
    double zero_atom = 0.0;
    std::optional<Measure> laplace;
    std::optional<Measure> stieltjes;
    std::vector<ClosedFormTerm> closed_form;
  };

  explicit GSFunction(Parts parts);

  static GSFunction laplace(double lam, Measure mu, double c = 0.0, double zero_atom = 0.0);
  static GSFunction stieltjes(double lam, Measure nu, double c = 0.0, double zero_atom = 0.0);
  static GSFunction closed(double lam, std::vector<ClosedFormTerm> terms, double c = 0.0, double zero_atom = 0.0);
  static GSFunction constant(double lam, double c) { return closed(lam, {}, c); }

  double lam() const noexcept { return lam_; }
  double eval(double x) const { return derivative(0, x); }
  // f^{(n)}(x); CapabilityError above derivative_cap(), DivergenceError when
  // an integral is infinite.
  double derivative(int n, double x) const;
  std::vector<double> derivatives(int max_n, double x) const;
  // Derivatives of the integral part I only.
  double integral_derivative(int n, double x) const;
  std::vector<double> integral_derivatives(int max_n, double x) const;

  const std::vector<PowerTerm>& power_terms() const noexcept { return power_; }
  bool has_integral_part() const noexcept { return preferred() != Representation::none; }
  Representation preferred() const noexcept;
  int derivative_cap() const;

  // Laplace-side measure of I relative to lam(): I(x) = int e^{-xs} s^{lam-1} dmu.
  Measure laplace_measure() const;
  const std::optional<Measure>& stieltjes_input() const noexcept { return nu_; }
  const std::optional<Measure>& laplace_input() const noexcept { return mu_; }
  const std::vector<ClosedFormTerm>& closed_terms() const noexcept { return closed_; }

  // Same function, operators taken with order lam2.
  GSFunction with_order(double lam2) const;
  // I alone (power terms dropped).
  GSFunction without_power_terms() const;

  // Largest gap |I_a - I_b| / max(1, |I_b|) between representations present,
  // over the grid; 0 with a single representation.
  double representation_gap(const std::vector<double>& xs) const;

  std::string describe() const;

 private:
  GSFunction() = default;
  double closed_derivative(int n, double x) const;
  double stieltjes_derivative(int n, double x) const;
  double laplace_derivative(int n, double x) const;

  double lam_ = 1.0;
  std::vector<PowerTerm> power_;
  std::vector<ClosedFormTerm> closed_;
  std::optional<Measure> nu_;
  double nu_lam_ = 1.0;
  std::optional<Measure> mu_;
  double mu_lam_ = 1.0;
};

// phi(s) = Gamma(lam)^{-1} int e^{-st} dnu(t), so that
// int e^{-xs} s^{lam-1} phi(s) ds = int (x+t)^{-lam} dnu(t).
double stieltjes_to_laplace_phi(const Measure& nu, double lam, double s);
// The density phi as a Laplace-side measure.
Measure stieltjes_to_laplace_measure(const Measure& nu, double lam);

// Derivative oracle consumed by the CM tests.
struct Differentiable {
  std::string label;
  int max_order = 0;
  std::function<std::vector<double>(int, double)> derivatives;  // f^{(0..n)}(x)
};

Differentiable as_differentiable(const GSFunction& f);

}  // namespace gsf
