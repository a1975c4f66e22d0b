#pragma once

#include <functional>
#include <span>
#include <string>

namespace gsf::quad {

using Integrand = std::function<double(double)>;

struct Options {
  double rel_tol = 1e-10;
  double abs_tol = 0.0;
  int max_panels = 1 << 14;
};

struct Result {
  double value = 0.0;
  double error = 0.0;
  double l1 = 0.0;  // integral of |f|, used for roundoff-level termination
  int panels = 0;
  bool converged = true;
};

// Global adaptive 21-point Gauss-Kronrod on a finite interval [a, b].
Result integrate(const Integrand& f, double a, double b, const Options& opts = {});

enum class Status { ok, divergent, not_converged };

struct RangeResult {
  double value = 0.0;
  double error = 0.0;
  Status status = Status::ok;
  std::string diagnostics;
};

struct RangeSpec {
  double a = 0.0;                       // >= 0
  double b = 0.0;                       // may be +inf
  double exponent_at_zero = 0.0;        // f(s) ~ s^exponent as s -> 0 (only used when a == 0)
  std::span<const double> breakpoints;  // interior split points (outside points are ignored)
  bool probe_divergence = false;        // always run the window-doubling divergence test
};

// Integral of f over (a, b) with 0 <= a < b <= inf. The range is split at 1
// (when it straddles it) and at the breakpoints; (p, inf) is mapped by
// s = p / t, and for -1 < exponent_at_zero < 0 the first panel uses
// s = p v^{1/(exponent+1)}. The integral is declared divergent when doubling
// the truncation window changes the value by more than 1% twice in a row.
RangeResult integrate_range(const Integrand& f, const RangeSpec& range, const Options& opts = {});

// int_0^inf f(s) ds where f(s) ~ s^exponent_at_zero near 0. Throws
// DivergenceError or QuadratureError instead of returning a status.
double quad_semiinfinite(const Integrand& f, double exponent_at_zero, std::span<const double> breakpoints = {},
                         const Options& opts = {});

}  // namespace gsf::quad
