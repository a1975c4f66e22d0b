#pragma once

// Gamma-family quantities: Gamma ratios, rising/falling factorials,
// binomial coefficients and the lower incomplete gamma function.

namespace gsf::specfun {

// Positive argument of Gamma or a Pochhammer base. Constructing one from a
// non-positive (or non-finite) value throws DomainError.
class GammaArg {
 public:
  GammaArg(double value);  // NOLINT: implicit by design of the call sites
  double value() const noexcept { return value_; }

 private:
  double value_;
};

double log_gamma(GammaArg a);

// Gamma(a) / Gamma(b). Exact product when a - b is a small integer,
// otherwise a direct ratio or a log-gamma difference when Gamma overflows.
double gamma_ratio(GammaArg a, GammaArg b);

// Rising factorial (a)_k = a (a+1) ... (a+k-1), (a)_0 = 1. Any real base is
// accepted (a <= 0 occurs as (lambda-1)_m for lambda < 1); k < 0 throws.
double pochhammer(double a, int k);

// Falling factorial a (a-1) ... (a-k+1).
double falling_factorial(double a, int k);

double binomial(int n, int k);
double factorial(int n);

// gamma(lam, x) = int_0^x e^{-u} u^{lam-1} du, not regularized.
double lower_incomplete_gamma(double lam, double x);
// Gamma(lam, x) = int_x^inf e^{-u} u^{lam-1} du.
double upper_incomplete_gamma(double lam, double x);

}  // namespace gsf::specfun
