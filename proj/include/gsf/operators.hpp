#pragma once

#include <string>
#include <vector>

#include "gsf/function.hpp"

namespace gsf {

enum class Route { leibniz, key_identity, recursion };
const char* to_string(Route r);
inline constexpr Route kAllRoutes[] = {Route::leibniz, Route::key_identity, Route::recursion};

// Coefficients a[m] with c_k^lam(f) = sum_m a[m] x^m f^{(m)}(x), built by the
// route's own logic. Cached per (lam, k, route).
const std::vector<double>& c_coefficients(double lam, int k, Route route);

// c_k^lam(f)(x) = x^{1-lam} (x^{lam-1+k} f(x))^{(k)}. Power terms are exact,
// the routes act on the integral part.
double c_op(const GSFunction& f, int k, double x, Route route = Route::leibniz);
// c_0 .. c_kmax at x sharing one derivative evaluation.
std::vector<double> c_op_all(const GSFunction& f, int k_max, double x, Route route = Route::leibniz);

// T_{n,k}^lam(f)(x) = (-1)^n sum_j C(k,j) Gamma(n+k+lam)/Gamma(n+j+lam) x^j f^{(n+j)}(x).
double T_op(const GSFunction& f, int n, int k, double x);
// (c_k)^{(n)}(x) for n = 0..n_max, via T_{n,k} = (-1)^n (c_k)^{(n)}.
std::vector<double> c_derivatives(const GSFunction& f, int k, int n_max, double x);

// g_k(f) = x^{-lam} (x^{lam-1+k} f)^{(k-1)} = c_{k-1}^{lam+1}(f).
double g_op(const GSFunction& f, int k, double x);

// int e^{-xs} s^{lam-1} d(mu_k)(s) with mu_k = derived_measure(mu, k).
double c_op_measure_side(const Measure& mu, double lam, int k, double x);
// Same with f's canonical Laplace measure plus its exact power-term contributions.
double c_op_measure_side(const GSFunction& f, int k, double x);

struct TDerivReport {
  double t_value = 0.0;
  double fd_value = 0.0;  // (-1)^n times the n-th central difference of c_k
  double abs_gap = 0.0;
  double rel_gap = 0.0;  // abs_gap / max(1, |t_value|)
  double h = 0.0;
};

// h <= 0 selects h = 1e-2 x; the difference quotient is Richardson-extrapolated.
TDerivReport t_equals_deriv_c_check(const GSFunction& f, int n, int k, double x, double h = 0.0);

struct ChuVandermonde {
  double lhs = 0.0;
  double rhs = 0.0;
  double gap = 0.0;      // |lhs - rhs|
  double rel_gap = 0.0;  // gap / max(1, |rhs|)
};

ChuVandermonde chu_vandermonde_check(double lam, int n, int k, int m);

struct OperatorEntry {
  int k = 0;
  double x = 0.0;
  double values[3] = {0.0, 0.0, 0.0};  // indexed by Route
  std::vector<double> t_values;        // T_{n,k} for n = 0..n_max
};

struct OperatorTable {
  double lam = 1.0;
  int k_max = 0;
  int n_max = 0;
  std::vector<double> grid;
  std::vector<OperatorEntry> entries;
  // max over entries of |route - leibniz| / (1 + |leibniz|)
  double discrepancy = 0.0;
};

OperatorTable operator_table(const GSFunction& f, int k_max, int n_max, const std::vector<double>& grid);

}  // namespace gsf
