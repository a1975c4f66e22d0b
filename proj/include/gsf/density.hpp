#pragma once

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace gsf {

enum class Provenance { closed_form, quadrature, finite_difference };

const char* to_string(Provenance p);

// Implementation interface behind SmoothDensity. eval(j, s) returns w^{(j)}(s).
class DensityModel {
 public:
  virtual ~DensityModel() = default;
  virtual double eval(int j, double s) const = 0;
  virtual int max_order() const = 0;
  virtual Provenance provenance() const = 0;
  // Power-law exponent of w at s -> 0+, when known and negative; 0 otherwise.
  // Only used to pick the endpoint substitution in quadrature.
  virtual double zero_exponent() const { return 0.0; }
  virtual std::string describe() const = 0;
};

// Immutable handle to a density with derivative access up to max_order().
class SmoothDensity {
 public:
  static constexpr int kClosedFormOrder = 32;
  static constexpr int kFiniteDifferenceCap = 6;

  explicit SmoothDensity(std::shared_ptr<const DensityModel> model);

  double operator()(double s) const { return eval(0, s); }
  // Throws CapabilityError when j > max_order().
  double eval(int j, double s) const;
  int max_order() const { return model_->max_order(); }
  Provenance provenance() const { return model_->provenance(); }
  double zero_exponent() const { return model_->zero_exponent(); }
  std::string describe() const { return model_->describe(); }

  // A s^p e^{-b s}
  static SmoothDensity exponential(double A, double p, double b, int max_order = kClosedFormOrder);
  // A s^p
  static SmoothDensity power_law(double A, double p, int max_order = kClosedFormOrder);
  // P(s) / Q(s), coefficients in ascending powers.
  static SmoothDensity rational(std::vector<double> num, std::vector<double> den, int max_order = kClosedFormOrder);
  // Parsed expression in s; derivatives by Richardson-extrapolated central differences.
  static SmoothDensity expression(const std::string& text, int max_order = 4, double zero_exponent = 0.0);
  static SmoothDensity finite_difference(std::function<double(double)> fn, int max_order, std::string label,
                                         double zero_exponent = 0.0);
  // Caller-supplied derivatives fn(j, s).
  static SmoothDensity from_derivatives(std::function<double(int, double)> fn, int max_order, Provenance provenance,
                                        std::string label, double zero_exponent = 0.0);
  static SmoothDensity linear_combination(const std::vector<std::pair<double, SmoothDensity>>& terms);

  // (-1)^k s^k w^{(k)}(s)
  SmoothDensity derived(int k) const;
  // coef * s^q * w(s)
  SmoothDensity power_weighted(double q, double coef = 1.0) const;
  // w(1/t) / t^2, the density of the push-forward under s -> 1/s.
  SmoothDensity reciprocal_image() const;
  SmoothDensity scaled(double c) const { return linear_combination({{c, *this}}); }

 private:
  std::shared_ptr<const DensityModel> model_;
};

// Central difference estimate of f^{(j)}(s), j <= kFiniteDifferenceCap, with
// a step eps^{1/(j+4)} max(s, scale_floor), kept below s/(j+1), and one
// Richardson extrapolation.
double central_derivative(const std::function<double(double)>& fn, int j, double s, double scale_floor = 0.0);

}  // namespace gsf
