#include <doctest.h>

#include <cmath>

#include "gsf/density.hpp"
#include "gsf/operators.hpp"
#include "gsf/specfun.hpp"

using namespace gsf;

namespace {
GSFunction inv_sq() { return GSFunction::stieltjes(2, Measure::atom(1)); }  // (x+1)^{-2}
GSFunction e_minus_x(double lam) { return GSFunction::laplace(lam, Measure::atom(1)).with_order(lam); }
}  // namespace

TEST_CASE("c_op examples") {
  for (Route r : kAllRoutes) {
    CHECK(c_op(inv_sq(), 1, 1, r) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(c_op(GSFunction::constant(1.5, 1.0), 2, 0.3, r) == doctest::Approx(3.75).epsilon(1e-14));
    for (double lam : {0.5, 1.0, 2.7}) {
      const GSFunction z = GSFunction::laplace(lam, Measure(), 0.0, 1.0);
      CHECK(c_op(z, 1, 1.7, r) == 0.0);
    }
  }
}

TEST_CASE("T_op examples") {
  const GSFunction e = GSFunction::laplace(2, Measure::atom(1));
  CHECK(T_op(e, 1, 1, 1.0) == doctest::Approx(2 * std::exp(-1.0)).epsilon(1e-12));
  for (int k = 0; k <= 4; ++k) {
    for (double x : {0.1, 2.0}) {
      CHECK(T_op(inv_sq(), 0, k, x) == c_op(inv_sq(), k, x, Route::leibniz));
      CHECK(T_op(GSFunction::constant(1.0, 1.0), 1, k, x) == 0.0);
    }
  }
}

TEST_CASE("t_equals_deriv_c_check") {
  const GSFunction e = GSFunction::laplace(2, Measure::atom(1));
  CHECK(t_equals_deriv_c_check(e, 1, 1, 1.0, 1e-4).abs_gap <= 1e-6);
  CHECK(t_equals_deriv_c_check(e, 0, 3, 1.0).abs_gap == 0.0);
  const TDerivReport r = t_equals_deriv_c_check(inv_sq(), 2, 1, 2.0, 1e-3);
  CHECK(r.abs_gap <= 1e-4);
  CHECK(r.t_value == doctest::Approx(24 * std::pow(3.0, -5)).epsilon(1e-12));
}

TEST_CASE("g_op") {
  const GSFunction f = inv_sq();
  for (double x : {0.2, 1.0, 5.0}) CHECK(g_op(f, 1, x) == doctest::Approx(f.eval(x)).epsilon(1e-14));
  const GSFunction f1 = f.with_order(1);
  CHECK(g_op(f1, 2, 1.0) == doctest::Approx(0.25).epsilon(1e-12));
  for (double x : ScanGrid::log_spaced(1e-2, 1e2, 17).points) {
    CHECK(std::abs(g_op(f1, 2, x) - c_op(f1, 1, x) - g_op(f1, 1, x)) <= 1e-9);
  }
}

TEST_CASE("c_op_measure_side") {
  const Measure w = Measure::density(SmoothDensity::exponential(1, 0, 1));
  CHECK(c_op_measure_side(w, 1, 1, 1.0) == doctest::Approx(0.25).epsilon(1e-9));
  CHECK(c_op(GSFunction::stieltjes(1, Measure::atom(1)), 1, 1.0) == doctest::Approx(0.25).epsilon(1e-12));
  const Measure leb = Measure::density(SmoothDensity::power_law(1, 0));
  CHECK(std::abs(c_op_measure_side(leb, 1.5, 2, 0.8)) <= 1e-12);
  CHECK(std::abs(c_op(GSFunction::laplace(1.5, leb), 2, 0.8)) <= 1e-9);
  const GSFunction g = GSFunction::laplace(1.5, w);
  CHECK(c_op_measure_side(w, 1.5, 0, 2.0) == doctest::Approx(g.eval(2.0)).epsilon(1e-9));
}

TEST_CASE("chu_vandermonde") {
  const ChuVandermonde a = chu_vandermonde_check(1.5, 1, 2, 0);
  CHECK(a.lhs == doctest::Approx(8.75).epsilon(1e-13));
  CHECK(a.rhs == doctest::Approx(8.75).epsilon(1e-13));
  for (int k = 0; k <= 8; ++k) {
    const ChuVandermonde d = chu_vandermonde_check(0.7, 3, k, k);
    CHECK(d.lhs == doctest::Approx(1.0));
    CHECK(d.rhs == doctest::Approx(1.0));
  }
  for (int n = 0; n <= 8; ++n)
    for (int k = 0; k <= 8; ++k)
      for (int m = 0; m <= k; ++m) {
        const ChuVandermonde c = chu_vandermonde_check(1.0, n, k, m);
        const double closed = specfun::binomial(k, m) * std::tgamma(n + k + 1.0) / std::tgamma(n + m + 1.0);
        CHECK(std::abs(c.rhs - closed) <= 1e-10 * std::max(1.0, closed));
        CHECK(c.rel_gap <= 1e-10);
      }
}

TEST_CASE("coefficient routes agree and are cached") {
  for (double lam : {0.5, 1.0, 2.5}) {
    for (int k = 0; k <= 10; ++k) {
      const auto& a = c_coefficients(lam, k, Route::leibniz);
      for (Route r : {Route::key_identity, Route::recursion}) {
        const auto& b = c_coefficients(lam, k, r);
        REQUIRE(a.size() == b.size());
        for (size_t m = 0; m < a.size(); ++m) CHECK(std::abs(a[m] - b[m]) <= 1e-12 * (1 + std::abs(a[m])));
      }
      CHECK(&c_coefficients(lam, k, Route::recursion) == &c_coefficients(lam, k, Route::recursion));
    }
  }
}

TEST_CASE("operator_table") {
  const OperatorTable t = operator_table(e_minus_x(2), 3, 2, {0.5, 1.0, 3.0});
  CHECK(t.entries.size() == 12);
  CHECK(t.discrepancy <= 1e-12);
  for (const auto& e : t.entries) {
    CHECK(e.t_values.size() == 3);
    CHECK(e.t_values[0] == e.values[0]);
  }
}

TEST_CASE("routes agree at tiny x for lam < 1") {
  for (double lam : {0.3, 0.5, 0.9}) {
    const GSFunction f = GSFunction::laplace(lam, Measure::density(SmoothDensity::exponential(1, 0, 1)));
    for (int k = 0; k <= 6; ++k) {
      for (double x : {1e-9, 1e-7}) {
        const double want = std::tgamma(lam + k) * std::pow(1 + x, -lam - k);
        for (Route r : kAllRoutes) CHECK(c_op(f, k, x, r) == doctest::Approx(want).epsilon(1e-9));
        CHECK(c_op_measure_side(f, k, x) == doctest::Approx(want).epsilon(1e-9));
      }
    }
  }
}
