#include "gsf/operators.hpp"

#include <bit>
#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

#include "gsf/detail/parallel.hpp"
#include "gsf/error.hpp"
#include "gsf/specfun.hpp"

namespace gsf {

using specfun::binomial;
using specfun::gamma_ratio;
using specfun::pochhammer;

const char* to_string(Route r) {
  switch (r) {
    case Route::leibniz:
      return "leibniz";
    case Route::key_identity:
      return "key_identity";
    case Route::recursion:
      return "recursion";
  }
  return "unknown";
}

namespace {

double sign_of(int n) { return n % 2 ? -1.0 : 1.0; }

std::vector<double> leibniz_coefficients(double lam, int k) {
  std::vector<double> a(k + 1);
  for (int j = 0; j <= k; ++j) a[j] = binomial(k, j) * gamma_ratio(k + lam, j + lam);
  return a;
}

// c_k = sum_j (lam-1)_{k-j} C(k,j) (x^j f)^{(j)}, (x^j f)^{(j)} = sum_m C(j,m) j!/m! x^m f^{(m)}.
std::vector<double> key_identity_coefficients(double lam, int k) {
  std::vector<double> a(k + 1, 0.0);
  for (int j = 0; j <= k; ++j) {
    const double outer = pochhammer(lam - 1.0, k - j) * binomial(k, j);
    if (outer == 0.0) continue;
    for (int m = 0; m <= j; ++m) {
      a[m] += outer * binomial(j, j - m) * specfun::falling_factorial(j, j - m);
    }
  }
  return a;
}

// c_k = (lam+k-1) c_{k-1} + x c_{k-1}', differentiating x^m f^{(m)} term-wise.
std::vector<double> recursion_coefficients(double lam, int k) {
  std::vector<double> a{1.0};
  for (int step = 1; step <= k; ++step) {
    std::vector<double> next(step + 1, 0.0);
    for (int m = 0; m < step; ++m) {
      next[m] += (lam + step - 1 + m) * a[m];
      next[m + 1] += a[m];
    }
    a = std::move(next);
  }
  return a;
}

// Exact c_k of the power terms, differentiated n times.
double power_part(const GSFunction& f, int k, int n, double x) {
  double sum = 0.0;
  for (const auto& t : f.power_terms()) {
    sum += t.coef * pochhammer(f.lam() - t.p, k) * sign_of(n) * pochhammer(t.p, n) * std::pow(x, -t.p - n);
  }
  return sum;
}

double t_sum(double lam, int n, int k, double x, const std::vector<double>& d) {
  double sum = 0.0;
  double xj = 1.0;
  for (int j = 0; j <= k; ++j) {
    sum += binomial(k, j) * gamma_ratio(n + k + lam, n + j + lam) * xj * d[n + j];
    xj *= x;
  }
  return sign_of(n) * sum;
}

double route_sum(double lam, int k, double x, Route route, const std::vector<double>& d) {
  if (route == Route::leibniz) return t_sum(lam, 0, k, x, d);
  const auto& a = c_coefficients(lam, k, route);
  double sum = 0.0;
  double xm = 1.0;
  for (int m = 0; m <= k; ++m) {
    sum += a[m] * xm * d[m];
    xm *= x;
  }
  return sum;
}

std::vector<double> derivs_of(const GSFunction& f, int order, double x) {
  if (!f.has_integral_part()) return std::vector<double>(order + 1, 0.0);
  return f.integral_derivatives(order, x);
}

void check_order(int k, const char* what) {
  if (k < 0) throw DomainError(std::string(what) + " must be non-negative");
}

}  // namespace

const std::vector<double>& c_coefficients(double lam, int k, Route route) {
  static std::mutex mutex;
  static std::map<std::tuple<std::uint64_t, int, int>, std::vector<double>> cache;
  check_order(k, "k");
  specfun::GammaArg check(lam);
  const auto key = std::make_tuple(std::bit_cast<std::uint64_t>(lam), k, static_cast<int>(route));
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::vector<double> a;
  switch (route) {
    case Route::leibniz:
      a = leibniz_coefficients(lam, k);
      break;
    case Route::key_identity:
      a = key_identity_coefficients(lam, k);
      break;
    case Route::recursion:
      a = recursion_coefficients(lam, k);
      break;
  }
  return cache.emplace(key, std::move(a)).first->second;
}

double c_op(const GSFunction& f, int k, double x, Route route) {
  check_order(k, "k");
  const auto d = derivs_of(f, k, x);
  return power_part(f, k, 0, x) + route_sum(f.lam(), k, x, route, d);
}

std::vector<double> c_op_all(const GSFunction& f, int k_max, double x, Route route) {
  check_order(k_max, "k");
  const auto d = derivs_of(f, k_max, x);
  std::vector<double> out(k_max + 1);
  for (int k = 0; k <= k_max; ++k) out[k] = power_part(f, k, 0, x) + route_sum(f.lam(), k, x, route, d);
  return out;
}

double T_op(const GSFunction& f, int n, int k, double x) {
  check_order(n, "n");
  check_order(k, "k");
  const auto d = derivs_of(f, n + k, x);
  return sign_of(n) * power_part(f, k, n, x) + t_sum(f.lam(), n, k, x, d);
}

std::vector<double> c_derivatives(const GSFunction& f, int k, int n_max, double x) {
  check_order(n_max, "n");
  check_order(k, "k");
  const auto d = derivs_of(f, n_max + k, x);
  std::vector<double> out(n_max + 1);
  for (int n = 0; n <= n_max; ++n) out[n] = power_part(f, k, n, x) + sign_of(n) * t_sum(f.lam(), n, k, x, d);
  return out;
}

double g_op(const GSFunction& f, int k, double x) {
  if (k < 1) throw DomainError("g_k requires k >= 1");
  return c_op(f.with_order(f.lam() + 1.0), k - 1, x);
}

double c_op_measure_side(const Measure& mu, double lam, int k, double x) {
  if (!(x > 0.0)) throw DomainError("evaluation point must be positive");
  const Measure mk = derived_measure(mu, k);
  MeasureIntegral spec;
  spec.exponent_at_zero = lam - 1.0;
  spec.breakpoints = {std::max(lam - 1.0, 1.0) / x};
  const auto r =
      integrate_against(mk, [x, lam](double s) { return std::exp(-x * s + (lam - 1.0) * std::log(s)); }, spec);
  if (r.status == quad::Status::divergent) throw DivergenceError("derived measure", r.diagnostics);
  if (r.status == quad::Status::not_converged) throw QuadratureError("derived measure: " + r.diagnostics);
  return r.value;
}

double c_op_measure_side(const GSFunction& f, int k, double x) {
  double v = power_part(f, k, 0, x);
  if (f.has_integral_part()) v += c_op_measure_side(f.laplace_measure(), f.lam(), k, x);
  return v;
}

TDerivReport t_equals_deriv_c_check(const GSFunction& f, int n, int k, double x, double h) {
  TDerivReport rep;
  rep.t_value = T_op(f, n, k, x);
  if (n == 0) {
    rep.fd_value = c_op(f, k, x, Route::leibniz);
  } else {
    if (h <= 0.0) h = 1e-2 * x;
    if (!(x - n * h > 0.0)) throw DomainError("t_equals_deriv_c_check requires x - n*h > 0");
    auto diff = [&](double step) {
      double sum = 0.0;
      for (int i = 0; i <= n; ++i) {
        sum += sign_of(i) * binomial(n, i) * c_op(f, k, x + (0.5 * n - i) * step);
      }
      return sum / std::pow(step, n);
    };
    const double coarse = diff(h);
    const double fine = diff(0.5 * h);
    rep.fd_value = sign_of(n) * (4.0 * fine - coarse) / 3.0;
  }
  rep.h = h;
  rep.abs_gap = std::abs(rep.t_value - rep.fd_value);
  rep.rel_gap = rep.abs_gap / std::max(1.0, std::abs(rep.t_value));
  return rep;
}

ChuVandermonde chu_vandermonde_check(double lam, int n, int k, int m) {
  if (n < 0 || m < 0 || m > k) throw DomainError("chu_vandermonde_check requires 0 <= m <= k and n >= 0");
  ChuVandermonde out;
  for (int j = m; j <= k; ++j) {
    out.lhs +=
        pochhammer(lam - 1.0, k - j) * binomial(k, j) * binomial(n + j, j - m) * specfun::falling_factorial(j, j - m);
  }
  out.rhs = binomial(k, m) * gamma_ratio(n + k + lam, n + m + lam);
  out.gap = std::abs(out.lhs - out.rhs);
  out.rel_gap = out.gap / std::max(1.0, std::abs(out.rhs));
  return out;
}

OperatorTable operator_table(const GSFunction& f, int k_max, int n_max, const std::vector<double>& grid) {
  check_order(k_max, "k");
  check_order(n_max, "n");
  OperatorTable table;
  table.lam = f.lam();
  table.k_max = k_max;
  table.n_max = n_max;
  table.grid = grid;
  std::vector<std::vector<OperatorEntry>> rows(grid.size());
  detail::parallel_for(grid.size(), [&](size_t i) {
    const double x = grid[i];
    const auto d = derivs_of(f, k_max + n_max, x);
    for (int k = 0; k <= k_max; ++k) {
      OperatorEntry e;
      e.k = k;
      e.x = x;
      for (Route r : kAllRoutes)
        e.values[static_cast<int>(r)] = power_part(f, k, 0, x) + route_sum(f.lam(), k, x, r, d);
      for (int n = 0; n <= n_max; ++n)
        e.t_values.push_back(sign_of(n) * power_part(f, k, n, x) + t_sum(f.lam(), n, k, x, d));
      rows[i].push_back(std::move(e));
    }
  });
  for (auto& row : rows) {
    for (auto& e : row) {
      const double ref = e.values[0];
      for (int r = 1; r < 3; ++r) {
        table.discrepancy = std::max(table.discrepancy, std::abs(e.values[r] - ref) / (1.0 + std::abs(ref)));
      }
      table.entries.push_back(std::move(e));
    }
  }
  return table;
}

}  // namespace gsf
