#include <doctest.h>

#include <cmath>
#include <limits>

#include "gsf/density.hpp"
#include "gsf/error.hpp"
#include "gsf/function.hpp"
#include "gsf/quadrature.hpp"

using namespace gsf;

TEST_CASE("eval") {
  CHECK(GSFunction::stieltjes(2, Measure::atom(1)).eval(1) == doctest::Approx(0.25).epsilon(1e-13));
  const GSFunction leb = GSFunction::laplace(1.5, Measure::density(SmoothDensity::power_law(1, 0)));
  CHECK(leb.eval(2) == doctest::Approx(std::tgamma(1.5) * std::pow(2, -1.5)).epsilon(1e-9));
  CHECK(leb.eval(2) == doctest::Approx(0.3133).epsilon(1e-4));
  for (double x : {1e-3, 1.0, 77.0}) CHECK(GSFunction::constant(1.0, 5.0).eval(x) == 5.0);
}

TEST_CASE("derivative") {
  const GSFunction e = GSFunction::laplace(1, Measure::atom(1));
  CHECK(e.derivative(3, 2) == doctest::Approx(-std::exp(-2.0)).epsilon(1e-13));
  CHECK(GSFunction::stieltjes(2, Measure::atom(1)).derivative(1, 1) == doctest::Approx(-0.25).epsilon(1e-13));
  for (int n = 1; n <= 4; ++n) CHECK(GSFunction::constant(1.0, 3.0).derivative(n, 0.7) == 0.0);
  const GSFunction z = GSFunction::laplace(1.5, Measure(), 0.0, 2.0);
  CHECK(z.derivative(2, 2.0) == doctest::Approx(2.0 * 1.5 * 2.5 * std::pow(2.0, -3.5)));
}

TEST_CASE("derivatives of density representations agree with closed forms") {
  // e^{-s} on the Laplace side at order lam gives Gamma(lam) (1+x)^{-lam}
  for (double lam : {1.0, 1.5, 2.0}) {
    const GSFunction f = GSFunction::laplace(lam, Measure::density(SmoothDensity::exponential(1, 0, 1)));
    const GSFunction g = GSFunction::closed(lam, {ClosedFormTerm::power_kernel(std::tgamma(lam), 1.0, lam)});
    for (double x : {1e-2, 0.5, 3.0, 40.0}) {
      for (int n = 0; n <= 4; ++n) {
        const double a = f.derivative(n, x), b = g.derivative(n, x);
        CHECK(std::abs(a - b) <= 1e-9 * (1 + std::abs(b)));
      }
    }
  }
}

TEST_CASE("stieltjes to laplace bridge") {
  const Measure phi = stieltjes_to_laplace_measure(Measure::atom(1), 2);
  const quad::RangeResult r = integrate_against(phi, [](double s) { return std::exp(-s) * s; });
  CHECK(std::abs(r.value - 0.25) <= 1e-8);
  CHECK(stieltjes_to_laplace_phi(Measure::atom(2), 1, 1) == doctest::Approx(std::exp(-2.0)));
  const GSFunction f = GSFunction::stieltjes(1.5, Measure::atom(1), 0.0, 0.7);
  // the zero atom stays a power term and never enters the bridge
  REQUIRE(f.power_terms().size() == 1);
  CHECK(f.power_terms()[0].p == 1.5);
  const Measure mu = f.laplace_measure();
  CHECK_FALSE(mu.has_atoms());
  CHECK(f.with_order(1.5).eval(2.0) == doctest::Approx(0.7 * std::pow(2.0, -1.5) + std::pow(3.0, -1.5)));
}

TEST_CASE("semi-infinite quadrature") {
  CHECK(std::abs(quad::quad_semiinfinite([](double s) { return std::exp(-s); }, 0.0) - 1.0) <= 1e-10);
  CHECK(quad::quad_semiinfinite([](double s) { return std::exp(-2 * s) * std::sqrt(s); }, 0.5) ==
        doctest::Approx(std::tgamma(1.5) / std::pow(2, 1.5)).epsilon(1e-9));
  quad::RangeSpec rs;
  rs.b = std::numeric_limits<double>::infinity();
  rs.exponent_at_zero = -0.5;
  CHECK(quad::integrate_range([](double s) { return std::exp(-s) / std::sqrt(s); }, rs).value ==
        doctest::Approx(1.772454).epsilon(1e-6));
}

TEST_CASE("representation consistency") {
  const GSFunction f(GSFunction::Parts{1.0,
                                       0.0,
                                       0.0,
                                       Measure::density(SmoothDensity::exponential(1, 0, 1)),
                                       std::nullopt,
                                       {ClosedFormTerm::power_kernel(1.0, 1.0, 1.0)}});
  CHECK(f.preferred() == Representation::closed_form);
  CHECK(f.representation_gap({0.1, 1.0, 10.0}) <= 1e-9);
}

TEST_CASE("capability cap") {
  const GSFunction f = GSFunction::laplace(1, Measure::density(SmoothDensity::exponential(1, 0, 1)));
  CHECK(f.derivative_cap() == GSFunction::kQuadratureCap);
  CHECK_THROWS_AS(f.derivative(GSFunction::kQuadratureCap + 1, 1.0), CapabilityError);
  CHECK(GSFunction::laplace(1, Measure::atom(1)).derivative_cap() == GSFunction::kClosedFormCap);
}

TEST_CASE("expression densities") {
  const SmoothDensity d = SmoothDensity::expression("exp(-s)*s^2", 4);
  CHECK(d.provenance() == Provenance::finite_difference);
  for (double s : {0.5, 1.0, 2.0}) {
    CHECK(d.eval(0, s) == doctest::Approx(s * s * std::exp(-s)).epsilon(1e-12));
    CHECK(d.eval(1, s) == doctest::Approx((2 * s - s * s) * std::exp(-s)).epsilon(1e-7));
    CHECK(d.eval(2, s) == doctest::Approx((2 - 4 * s + s * s) * std::exp(-s)).scale(1).epsilon(1e-5));
  }
  CHECK_THROWS_AS(d.eval(5, 1.0), CapabilityError);
}

TEST_CASE("tiny evaluation points keep the density mass in view") {
  for (double lam : {0.3, 0.5, 0.9}) {
    const GSFunction f = GSFunction::laplace(lam, Measure::density(SmoothDensity::exponential(1, 0, 1)));
    for (double x : {1e-9, 1e-7, 1e-6}) {
      for (int n = 0; n <= 3; ++n) {
        const double want = (n % 2 ? -1.0 : 1.0) * std::tgamma(lam + n) * std::pow(1 + x, -lam - n);
        CHECK(f.derivative(n, x) == doctest::Approx(want).epsilon(1e-10));
      }
    }
  }
}
