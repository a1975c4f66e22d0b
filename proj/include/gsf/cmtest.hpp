#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gsf/function.hpp"
#include "gsf/operators.hpp"

namespace gsf {

enum class CMMethod { derivative_sign, finite_difference };
const char* to_string(CMMethod m);

struct OrderMinimum {
  int n = 0;
  double min_value = 0.0;  // min over the grid of (-1)^n f^{(n)} (or the signed difference)
  double witness = 0.0;    // grid point of the minimum
  double tolerance = 0.0;  // tol * (1 + |F_n(x_min)|)
  Verdict verdict = Verdict::pass;
  std::string note;
};

struct CMReport {
  CMMethod method = CMMethod::derivative_sign;
  std::vector<OrderMinimum> orders;
  Verdict verdict = Verdict::pass;
  double tolerance = 0.0;
  double h = 0.0;  // difference step (finite_difference only)
  std::optional<int> fail_order;
  std::string note;
};

// Default tolerance and inner derivative order for the CM tests.
inline constexpr double kDefaultCMTolerance = 1e-9;
inline constexpr int kDefaultCMOrder = 8;

CMReport cm_check_derivatives(const Differentiable& f, int N, const ScanGrid& grid, double tol = kDefaultCMTolerance);
CMReport cm_check_derivatives(const GSFunction& f, int N, const ScanGrid& grid, double tol = kDefaultCMTolerance);

// (-1)^n Delta_h^n f(x) = sum_i (-1)^i C(n,i) f(x + i h). h <= 0 selects half
// the smallest grid gap.
CMReport cm_check_differences(const std::function<double(double)>& f, int N, const ScanGrid& grid, double h = 0.0,
                              double tol = kDefaultCMTolerance);
CMReport cm_check_differences(const GSFunction& f, int N, const ScanGrid& grid, double h = 0.0,
                              double tol = kDefaultCMTolerance);

struct MeasureCrossCheck {
  bool available = false;
  PositivityReport scan;
  bool agrees = true;  // measure-side verdict matches the function-side verdict
  std::string note;
};

struct ClassEntry {
  int k = 0;
  int derivative_orders = 0;
  CMReport report;
  MeasureCrossCheck measure;
};

struct ClassReport {
  double lam = 1.0;
  int N = 0;
  std::vector<ClassEntry> entries;
  // Largest K with c_0..c_K all passing (-1 when c_0 fails or is inconclusive).
  int member_up_to = -1;
  std::optional<int> fails_at;
  Verdict verdict = Verdict::pass;
  std::string caveat;
};

// Runs cm_check_derivatives on x -> c_k^lam(f)(x) for k = 0..N. Inner
// derivative order defaults to N, reduced so that k + order stays within
// f's derivative cap.
ClassReport class_membership(const GSFunction& f, int N, const ScanGrid& grid, double tol = kDefaultCMTolerance,
                             int derivative_orders = -1);

struct LimitProbe {
  int j = 0;
  std::vector<double> xs;
  std::vector<double> values;
  double limit = 0.0;
  Verdict verdict = Verdict::pass;
};

struct SignLimitReport {
  double lam = 1.0;
  int k = 0;
  // Whether f passed the C_k^lam class test on the grid (hypothesis of the sign and limit checks).
  bool hypothesis_certified = false;
  // (i) min over the grid of (x^{lam-1+k} f)^{(j)}, j = 0..k
  std::vector<OrderMinimum> nonnegativity;
  std::vector<LimitProbe> vanishing;  // (ii) j = 0..k-2
  std::optional<LimitProbe> finite;   // (iii) j = k-1
  Verdict verdict = Verdict::pass;
};

SignLimitReport sign_limit_checks(const GSFunction& f, int k, const ScanGrid& grid, double tol = kDefaultCMTolerance);

// (x^{lam-1+k} f(x))^{(j)}
double weighted_power_derivative(const GSFunction& f, int k, int j, double x);

}  // namespace gsf
