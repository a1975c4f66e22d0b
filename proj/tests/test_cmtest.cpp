#include <doctest.h>

#include <cmath>

#include "gsf/cmtest.hpp"
#include "gsf/operators.hpp"

using namespace gsf;

namespace {
Measure w_rational() { return Measure::density(SmoothDensity::rational({1}, {1, 0, 1})); }
Measure w_exp() { return Measure::density(SmoothDensity::exponential(1, 0, 1)); }
}  // namespace

TEST_CASE("cm_check_derivatives") {
  const ScanGrid g = ScanGrid::standard();
  CHECK(cm_check_derivatives(GSFunction::laplace(1, Measure::atom(1)), 6, g).verdict == Verdict::pass);

  Differentiable c1;
  c1.label = "(2-x)e^{-x}";
  c1.max_order = 0;
  c1.derivatives = [](int, double x) { return std::vector<double>{(2 - x) * std::exp(-x)}; };
  const CMReport bad = cm_check_derivatives(c1, 0, ScanGrid{{1.0, 2.0, 3.0}, 1e-9});
  CHECK(bad.verdict == Verdict::fail);
  REQUIRE(bad.fail_order);
  CHECK(*bad.fail_order == 0);
  CHECK(bad.orders[0].witness == 3.0);
  CHECK(bad.orders[0].min_value == doctest::Approx(-std::exp(-3.0)).epsilon(1e-13));

  const CMReport five = cm_check_derivatives(GSFunction::constant(1.0, 5.0), 6, g);
  CHECK(five.verdict == Verdict::pass);
  REQUIRE(five.orders.size() == 7);
  CHECK(five.orders[0].min_value == 5.0);
  for (int n = 1; n <= 6; ++n) CHECK(five.orders[n].min_value == 0.0);
}

TEST_CASE("cm_check_derivatives reports capability limits") {
  const GSFunction f = GSFunction::laplace(1, w_exp());
  const CMReport r = cm_check_derivatives(f, 20, ScanGrid::log_spaced(0.1, 10, 8));
  CHECK(r.verdict == Verdict::inconclusive);
  REQUIRE(r.orders.size() == 21);
  CHECK(r.orders[12].verdict == Verdict::pass);
  CHECK(r.orders[13].verdict == Verdict::inconclusive);
  CHECK_FALSE(r.orders[13].note.empty());
}

TEST_CASE("cm_check_differences") {
  const auto inv = [](double x) { return 1.0 / x; };
  const CMReport r = cm_check_differences(inv, 2, ScanGrid{{1.0}, 1e-12}, 1.0);
  CHECK(r.orders[2].min_value == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  const auto e = [](double x) { return std::exp(-x); };
  for (double h : {0.1, 0.7}) {
    const CMReport d = cm_check_differences(e, 4, ScanGrid{{0.5}, 1e-12}, h);
    CHECK(d.verdict == Verdict::pass);
    for (int n = 0; n <= 4; ++n)
      CHECK(d.orders[n].min_value == doctest::Approx(std::pow(1 - std::exp(-h), n) * std::exp(-0.5)).epsilon(1e-9));
  }
  const CMReport c = cm_check_differences(GSFunction::constant(1, 2.0), 5, ScanGrid::standard());
  CHECK(c.verdict == Verdict::pass);
  for (int n = 1; n <= 5; ++n) CHECK(std::abs(c.orders[n].min_value) <= 1e-9);
}

TEST_CASE("class_membership") {
  const ScanGrid g = ScanGrid::standard();
  const ClassReport r = class_membership(GSFunction::laplace(1, w_rational()), 2, g);
  CHECK(r.member_up_to == 1);
  REQUIRE(r.fails_at);
  CHECK(*r.fails_at == 2);
  CHECK(r.verdict == Verdict::fail);
  const auto& m = r.entries[2].measure;
  REQUIRE(m.available);
  CHECK(m.scan.verdict == Verdict::fail);
  CHECK(m.scan.min_value <= -0.05);
  CHECK(m.agrees);

  const ClassReport e = class_membership(GSFunction::laplace(1.5, w_exp()), 4, g);
  CHECK(e.member_up_to == 4);
  CHECK(e.verdict == Verdict::pass);
  CHECK_FALSE(e.fails_at);

  const ClassReport a = class_membership(GSFunction::laplace(2, Measure::atom(1)), 1, g);
  CHECK(a.member_up_to == 0);
  REQUIRE(a.fails_at);
  CHECK(*a.fails_at == 1);
}

TEST_CASE("sign_limit_checks") {
  const ScanGrid g = ScanGrid::log_spaced(1e-2, 1e2, 24);
  for (double lam : {0.5, 1.0, 2.0}) {
    const SignLimitReport r = sign_limit_checks(GSFunction::laplace(lam, Measure(), 0.0, 1.0), 3, g);
    CHECK(r.verdict == Verdict::pass);
    REQUIRE(r.finite);
    CHECK(r.finite->limit == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(r.vanishing.size() == 2);
  }
  const SignLimitReport b = sign_limit_checks(GSFunction::stieltjes(2, Measure::atom(1)), 2, g);
  CHECK(b.verdict == Verdict::pass);
  CHECK(b.hypothesis_certified);
  REQUIRE(b.finite);
  CHECK(std::abs(b.finite->limit) <= 1e-6);

  // x^{lam-1+k} f = x for f = 1, lam = k = 1; (x)^{(0)} -> 0 as x -> 0
  const SignLimitReport c = sign_limit_checks(GSFunction::constant(1.0, 1.0), 1, g);
  CHECK(c.verdict == Verdict::pass);
  REQUIRE(c.finite);
  CHECK(std::abs(c.finite->limit) <= 1e-6);
}

TEST_CASE("weighted_power_derivative") {
  const GSFunction f = GSFunction::stieltjes(2, Measure::atom(1));
  // x^3 (x+1)^{-2}; first derivative x^2 (x+3) / (x+1)^3
  for (double x : {0.3, 2.0}) {
    CHECK(weighted_power_derivative(f, 2, 0, x) == doctest::Approx(x * x * x / ((x + 1) * (x + 1))));
    CHECK(weighted_power_derivative(f, 2, 1, x) == doctest::Approx(x * x * (x + 3) / std::pow(x + 1, 3)));
  }
}
