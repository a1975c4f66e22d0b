#include "gsf/cmtest.hpp"

#include <algorithm>
#include <cmath>

#include "gsf/detail/limits.hpp"
#include "gsf/detail/parallel.hpp"
#include "gsf/error.hpp"
#include "gsf/specfun.hpp"

namespace gsf {

using specfun::binomial;
using specfun::falling_factorial;

const char* to_string(CMMethod m) { return m == CMMethod::derivative_sign ? "derivative_sign" : "finite_difference"; }

namespace {

double sign_of(int n) { return n % 2 ? -1.0 : 1.0; }

// values[i][n] holds F_n at grid point i; a short row means orders beyond
// its size could not be evaluated there (reason in notes[i]).
struct PointTable {
  std::vector<std::vector<double>> values;
  std::vector<std::string> notes;
};

CMReport fold(const PointTable& table, const ScanGrid& grid, int N, double tol, CMMethod method) {
  CMReport rep;
  rep.method = method;
  rep.tolerance = tol;
  bool any_fail = false, any_inconclusive = false;
  for (int n = 0; n <= N; ++n) {
    OrderMinimum om;
    om.n = n;
    bool have = false, missing = false;
    double scale_ref = 0.0;
    bool scale_set = false;
    for (size_t i = 0; i < grid.points.size(); ++i) {
      const auto& row = table.values[i];
      if (static_cast<int>(row.size()) <= n || !std::isfinite(row[n])) {
        missing = true;
        if (om.note.empty()) {
          om.note = table.notes[i].empty() ? "non-finite value at x=" + std::to_string(grid.points[i]) : table.notes[i];
        }
        continue;
      }
      if (!scale_set) {
        scale_ref = std::abs(row[n]);
        scale_set = true;
      }
      if (!have || row[n] < om.min_value) {
        om.min_value = row[n];
        om.witness = grid.points[i];
      }
      have = true;
    }
    om.tolerance = tol * (1.0 + scale_ref);
    if (have && om.min_value < -om.tolerance) {
      om.verdict = Verdict::fail;
      if (!any_fail) rep.fail_order = n;
      any_fail = true;
    } else if (missing || !have) {
      om.verdict = Verdict::inconclusive;
      any_inconclusive = true;
    } else {
      om.verdict = Verdict::pass;
    }
    rep.orders.push_back(om);
  }
  rep.verdict = any_fail ? Verdict::fail : any_inconclusive ? Verdict::inconclusive : Verdict::pass;
  if (rep.verdict == Verdict::pass) {
    rep.note = "no violation found at orders <= " + std::to_string(N) + " on the grid";
  }
  return rep;
}

// Evaluates derivatives up to `order` at x, shortening the result at the
// first order that fails.
std::vector<double> safe_integral_derivatives(const GSFunction& f, int order, double x, std::string& note) {
  std::vector<double> d;
  if (!f.has_integral_part()) return std::vector<double>(order + 1, 0.0);
  for (int n = 0; n <= order; ++n) {
    try {
      d.push_back(f.integral_derivative(n, x));
    } catch (const std::exception& e) {
      note = e.what();
      break;
    }
  }
  return d;
}

double power_part(const GSFunction& f, int k, int n, double x) {
  double sum = 0.0;
  for (const auto& t : f.power_terms()) {
    sum += t.coef * specfun::pochhammer(f.lam() - t.p, k) * sign_of(n) * specfun::pochhammer(t.p, n) *
           std::pow(x, -t.p - n);
  }
  return sum;
}

// (-1)^n c_k^{(n)} = T_{n,k} from a shared derivative vector of I.
double t_from(const GSFunction& f, int n, int k, double x, const std::vector<double>& d) {
  const double lam = f.lam();
  double sum = 0.0;
  double xj = 1.0;
  for (int j = 0; j <= k; ++j) {
    sum += binomial(k, j) * specfun::gamma_ratio(n + k + lam, n + j + lam) * xj * d[n + j];
    xj *= x;
  }
  return sign_of(n) * sum + sign_of(n) * power_part(f, k, n, x);
}

}  // namespace

CMReport cm_check_derivatives(const Differentiable& f, int N, const ScanGrid& grid, double tol) {
  if (N < 0) throw DomainError("N must be non-negative");
  grid.validate();
  PointTable table;
  table.values.resize(grid.points.size());
  table.notes.resize(grid.points.size());
  const int order = std::min(N, f.max_order);
  detail::parallel_for(grid.points.size(), [&](size_t i) {
    try {
      auto d = f.derivatives(order, grid.points[i]);
      for (int n = 0; n < static_cast<int>(d.size()); ++n) d[n] *= sign_of(n);
      table.values[i] = std::move(d);
      if (order < N) table.notes[i] = "derivative order capped at " + std::to_string(order);
    } catch (const std::exception& e) {
      table.notes[i] = e.what();
    }
  });
  return fold(table, grid, N, tol, CMMethod::derivative_sign);
}

CMReport cm_check_derivatives(const GSFunction& f, int N, const ScanGrid& grid, double tol) {
  if (N < 0) throw DomainError("N must be non-negative");
  grid.validate();
  PointTable table;
  table.values.resize(grid.points.size());
  table.notes.resize(grid.points.size());
  const int order = std::min(N, f.derivative_cap());
  detail::parallel_for(grid.points.size(), [&](size_t i) {
    const double x = grid.points[i];
    auto d = safe_integral_derivatives(f, order, x, table.notes[i]);
    std::vector<double> row;
    for (int n = 0; n < static_cast<int>(d.size()); ++n) row.push_back(sign_of(n) * (d[n] + power_part(f, 0, n, x)));
    table.values[i] = std::move(row);
    if (order < N && table.notes[i].empty()) {
      table.notes[i] = "derivative order above the cap " + std::to_string(order);
    }
  });
  return fold(table, grid, N, tol, CMMethod::derivative_sign);
}

CMReport cm_check_differences(const std::function<double(double)>& f, int N, const ScanGrid& grid, double h,
                              double tol) {
  if (N < 0) throw DomainError("N must be non-negative");
  grid.validate();
  if (h <= 0.0) {
    double gap = std::numeric_limits<double>::infinity();
    for (size_t i = 1; i < grid.points.size(); ++i) gap = std::min(gap, grid.points[i] - grid.points[i - 1]);
    h = std::isfinite(gap) ? 0.5 * gap : 0.5 * grid.points.front();
  }
  PointTable table;
  table.values.resize(grid.points.size());
  table.notes.resize(grid.points.size());
  detail::parallel_for(grid.points.size(), [&](size_t i) {
    const double x = grid.points[i];
    try {
      std::vector<double> fv(N + 1);
      for (int i2 = 0; i2 <= N; ++i2) fv[i2] = f(x + i2 * h);
      std::vector<double> row(N + 1);
      for (int n = 0; n <= N; ++n) {
        double sum = 0.0;
        for (int j = 0; j <= n; ++j) sum += sign_of(j) * binomial(n, j) * fv[j];
        row[n] = sum;
      }
      table.values[i] = std::move(row);
    } catch (const std::exception& e) {
      table.notes[i] = e.what();
    }
  });
  CMReport rep = fold(table, grid, N, tol, CMMethod::finite_difference);
  rep.h = h;
  return rep;
}

CMReport cm_check_differences(const GSFunction& f, int N, const ScanGrid& grid, double h, double tol) {
  return cm_check_differences([&f](double x) { return f.eval(x); }, N, grid, h, tol);
}

ClassReport class_membership(const GSFunction& f, int N, const ScanGrid& grid, double tol, int derivative_orders) {
  if (N < 0) throw DomainError("N must be non-negative");
  grid.validate();
  const int cap = f.derivative_cap();
  const int D = derivative_orders < 0 ? N : derivative_orders;
  const int top = std::min(cap, N + D);
  const size_t P = grid.points.size();

  std::vector<std::vector<double>> d(P);
  std::vector<std::string> notes(P);
  detail::parallel_for(P, [&](size_t i) { d[i] = safe_integral_derivatives(f, top, grid.points[i], notes[i]); });

  ClassReport rep;
  rep.lam = f.lam();
  rep.N = N;
  rep.caveat =
      "pass means no violation was found on the grid at the derivative orders listed; c_0..c_{k-1} "
      "being non-negative on a grid does not by itself guarantee the numerical behavior of c_k";

  std::optional<Measure> mu;
  std::string mu_note;
  try {
    if (f.has_integral_part()) mu = f.laplace_measure();
  } catch (const std::exception& e) {
    mu_note = e.what();
  }
  const bool density_measure = mu && mu->has_density();

  bool prefix = true;
  for (int k = 0; k <= N; ++k) {
    ClassEntry entry;
    entry.k = k;
    entry.derivative_orders = std::max(-1, std::min(D, cap - k));
    if (entry.derivative_orders < 0) {
      entry.report.verdict = Verdict::inconclusive;
      entry.report.note = "c_" + std::to_string(k) + " needs derivatives beyond the cap " + std::to_string(cap);
    } else {
      PointTable table;
      table.values.resize(P);
      table.notes = notes;
      for (size_t i = 0; i < P; ++i) {
        const int avail = static_cast<int>(d[i].size()) - 1 - k;
        for (int n = 0; n <= std::min(avail, entry.derivative_orders); ++n) {
          table.values[i].push_back(t_from(f, n, k, grid.points[i], d[i]));
        }
        if (avail >= entry.derivative_orders) table.notes[i].clear();
      }
      entry.report = fold(table, grid, entry.derivative_orders, tol, CMMethod::derivative_sign);
    }

    if (density_measure) {
      entry.measure.available = true;
      try {
        entry.measure.scan = positivity_scan(derived_measure(*mu, k), grid);
        const Verdict a = entry.measure.scan.verdict, b = entry.report.verdict;
        if (a != Verdict::inconclusive && b != Verdict::inconclusive) {
          entry.measure.agrees = a == b;
          if (!entry.measure.agrees) entry.measure.note = "measure-side and function-side verdicts disagree";
        }
      } catch (const std::exception& e) {
        entry.measure.available = false;
        entry.measure.note = e.what();
      }
    } else if (!mu_note.empty()) {
      entry.measure.note = mu_note;
    }

    if (entry.report.verdict == Verdict::fail && !rep.fails_at) rep.fails_at = k;
    if (prefix && entry.report.verdict == Verdict::pass) {
      rep.member_up_to = k;
    } else {
      prefix = false;
    }
    rep.entries.push_back(std::move(entry));
  }
  if (rep.fails_at) {
    rep.verdict = Verdict::fail;
  } else if (rep.member_up_to == N) {
    rep.verdict = Verdict::pass;
  } else {
    rep.verdict = Verdict::inconclusive;
  }
  return rep;
}

double weighted_power_derivative(const GSFunction& f, int k, int j, double x) {
  const double e = f.lam() - 1.0 + k;
  double sum = 0.0;
  for (const auto& t : f.power_terms()) sum += t.coef * falling_factorial(e - t.p, j) * std::pow(x, e - t.p - j);
  if (f.has_integral_part()) {
    for (int i = 0; i <= j; ++i) {
      const double c = binomial(j, i) * falling_factorial(e, i);
      if (c != 0.0) sum += c * std::pow(x, e - i) * f.integral_derivative(j - i, x);
    }
  }
  return sum;
}

SignLimitReport sign_limit_checks(const GSFunction& f, int k, const ScanGrid& grid, double tol) {
  if (k < 0) throw DomainError("k must be non-negative");
  grid.validate();
  SignLimitReport rep;
  rep.lam = f.lam();
  rep.k = k;
  bool any_fail = false, any_inconclusive = false;

  try {
    rep.hypothesis_certified = class_membership(f, k, grid, tol, std::min(k, 2)).verdict == Verdict::pass;
  } catch (const std::exception&) {
    rep.hypothesis_certified = false;
  }

  PointTable table;
  table.values.resize(grid.points.size());
  table.notes.resize(grid.points.size());
  detail::parallel_for(grid.points.size(), [&](size_t i) {
    try {
      for (int j = 0; j <= k; ++j) table.values[i].push_back(weighted_power_derivative(f, k, j, grid.points[i]));
    } catch (const std::exception& e) {
      table.notes[i] = e.what();
    }
  });
  CMReport signs = fold(table, grid, k, tol, CMMethod::derivative_sign);
  rep.nonnegativity = signs.orders;
  if (signs.verdict == Verdict::fail) any_fail = true;
  if (signs.verdict == Verdict::inconclusive) any_inconclusive = true;

  auto probe = [&](int j) {
    LimitProbe p;
    p.j = j;
    for (int e = 2; e <= 6; ++e) p.xs.push_back(std::pow(10.0, -e));
    try {
      for (double x : p.xs) p.values.push_back(weighted_power_derivative(f, k, j, x));
    } catch (const std::exception&) {
      p.verdict = Verdict::inconclusive;
      return p;
    }
    const auto& v = p.values;
    const size_t n = v.size();
    p.limit = detail::aitken(v[n - 3], v[n - 2], v[n - 1]);
    if (!std::all_of(v.begin(), v.end(), [](double a) { return std::isfinite(a); })) p.verdict = Verdict::fail;
    return p;
  };

  for (int j = 0; j + 2 <= k; ++j) {
    LimitProbe p = probe(j);
    if (p.verdict == Verdict::pass) {
      const auto& v = p.values;
      const size_t n = v.size();
      double ref = 1.0;
      for (double a : v) ref = std::max(ref, std::abs(a));
      bool monotone = true;
      for (size_t i = n - 4; i + 1 < n; ++i) monotone = monotone && std::abs(v[i + 1]) <= std::abs(v[i]) * (1 + 1e-12);
      p.verdict = monotone && std::abs(p.limit) <= 1e-6 * ref ? Verdict::pass : Verdict::fail;
    }
    if (p.verdict == Verdict::fail) any_fail = true;
    if (p.verdict == Verdict::inconclusive) any_inconclusive = true;
    rep.vanishing.push_back(std::move(p));
  }
  if (k >= 1) {
    LimitProbe p = probe(k - 1);
    if (p.verdict == Verdict::pass) {
      const auto& v = p.values;
      const size_t n = v.size();
      bool settling = true;
      for (size_t i = n - 4; i + 2 < n; ++i) {
        settling = settling && std::abs(v[i + 2] - v[i + 1]) <= std::abs(v[i + 1] - v[i]) * (1 + 1e-12) + 1e-15;
      }
      const bool small = std::abs(v[n - 1] - v[n - 2]) <= 1e-3 * (1.0 + std::abs(p.limit));
      p.verdict = settling && small && std::isfinite(p.limit) ? Verdict::pass : Verdict::fail;
    }
    if (p.verdict == Verdict::fail) any_fail = true;
    if (p.verdict == Verdict::inconclusive) any_inconclusive = true;
    rep.finite = std::move(p);
  }
  rep.verdict = any_fail ? Verdict::fail : any_inconclusive ? Verdict::inconclusive : Verdict::pass;
  return rep;
}

}  // namespace gsf
