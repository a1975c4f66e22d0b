#include <doctest.h>

#include <cmath>
#include <limits>

#include "gsf/error.hpp"
#include "gsf/measure.hpp"

using namespace gsf;

namespace {
const double kInf = std::numeric_limits<double>::infinity();
Measure exp_density() { return Measure::density(SmoothDensity::exponential(1, 0, 1)); }
Measure w_rational() { return Measure::density(SmoothDensity::rational({1}, {1, 0, 1})); }
}  // namespace

TEST_CASE("construction invariants") {
  CHECK_THROWS_AS(Measure({{0.0, 1.0}}, {}), DomainError);
  CHECK_THROWS_AS(Measure({}, {{2.0, 1.0, SmoothDensity::power_law(1, 0)}}), DomainError);
  CHECK_THROWS_AS(Measure({}, {{0.0, 2.0, SmoothDensity::power_law(1, 0)}, {1.0, 3.0, SmoothDensity::power_law(1, 0)}}),
                  DomainError);
  CHECK_NOTHROW(Measure({}, {{0.0, 1.0, SmoothDensity::power_law(1, 0)}, {1.0, 3.0, SmoothDensity::power_law(1, 0)}}));
}

TEST_CASE("moment") {
  CHECK(moment(Measure::atom(2, 3), 2) == 12.0);
  CHECK(std::abs(moment(exp_density(), 3) - 6.0) <= 1e-8);
  CHECK(moment(Measure::atom(1), 0) == 1.0);
  CHECK(moment(Measure::density(SmoothDensity::power_law(1, 0), 1.0, kInf), 0) == kInf);
  CHECK(moment(w_rational(), 1) == kInf);
  CHECK(moment(w_rational(), 0) == doctest::Approx(M_PI / 2).epsilon(1e-9));
}

TEST_CASE("derived_measure") {
  const Measure m2 = derived_measure(exp_density(), 2);
  for (double s : {0.1, 1.0, 3.0, 10.0}) CHECK(m2.density_at(0, s) == doctest::Approx(s * s * std::exp(-s)));
  const Measure m0 = derived_measure(w_rational(), 0);
  CHECK(m0.density_at(0, 0.7) == doctest::Approx(w_rational().density_at(0, 0.7)));
  CHECK_THROWS_AS(derived_measure(Measure::atom(1), 1), NotAMeasureError);
  CHECK(derived_measure(Measure::atom(1, 2.0), 0).atoms().at(0).w == 2.0);
}

TEST_CASE("derived_measure turns a kink into an atom") {
  // w = 1 - s on (0,1): w'' = 0 inside, w' jumps by +1 at s = 1
  const Measure mu = Measure::density(SmoothDensity::rational({1, -1}, {1}), 0.0, 1.0);
  const Measure m1 = derived_measure(mu, 1);
  CHECK(m1.density_at(0, 0.5) == doctest::Approx(0.5));
  CHECK_FALSE(m1.has_atoms());
  const Measure m2 = derived_measure(mu, 2);
  REQUIRE(m2.atoms().size() == 1);
  CHECK(m2.atoms()[0].s == 1.0);
  CHECK(m2.atoms()[0].w == doctest::Approx(1.0));
  CHECK(m2.density_at(0, 0.5) == doctest::Approx(0.0));
  const Measure step = Measure::density(SmoothDensity::power_law(1, 0), 0.0, 1.0);
  CHECK_THROWS_AS(derived_measure(step, 2), NotAMeasureError);
}

TEST_CASE("positivity_scan") {
  const ScanGrid g = ScanGrid::standard();
  CHECK(positivity_scan(derived_measure(w_rational(), 1), g).verdict == Verdict::pass);
  const PositivityReport r = positivity_scan(derived_measure(w_rational(), 2), ScanGrid::log_spaced(1e-2, 10, 200));
  CHECK(r.verdict == Verdict::fail);
  CHECK(r.min_value <= -0.05);
  CHECK(r.witness > 0.0);
  CHECK(r.witness < 1.0 / std::sqrt(3.0));
  // the density s^2 (6 s^2 - 2) / (1 + s^2)^3 at s = 0.5
  const double at_half = derived_measure(w_rational(), 2).density_at(0, 0.5);
  CHECK(at_half == doctest::Approx(0.25 * (1.5 - 2) / std::pow(1.25, 3)).epsilon(1e-9));
  const PositivityReport z = positivity_scan(Measure::density(SmoothDensity::power_law(0, 0)), g);
  CHECK(z.verdict == Verdict::pass);
  CHECK(z.min_value == 0.0);
  CHECK(positivity_scan(Measure(), g).verdict == Verdict::pass);
}

TEST_CASE("tail_power_integral") {
  CHECK(tail_power_integral(Measure::atom(1), 2.3, 0.5) == 1.0);
  CHECK(tail_power_integral(Measure::atom(1), 2.3, 2.0) == 0.0);
  CHECK(std::abs(tail_power_integral(exp_density(), 1, 1) - 0.21938393439552) <= 1e-10);
}

TEST_CASE("levy_admissibility") {
  CHECK(levy_admissibility(Measure::atom(1), 2).admissible);
  CHECK_FALSE(levy_admissibility(Measure::density(SmoothDensity::power_law(1, -1), 0.0, 1.0), 1).admissible);
  const Admissibility a = levy_admissibility(Measure::density(SmoothDensity::power_law(1, 0), 1.0, kInf), 2);
  CHECK(a.admissible);
  CHECK(a.tail == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("image_reciprocal") {
  const Measure a = image_reciprocal(Measure::atom(2));
  REQUIRE(a.atoms().size() == 1);
  CHECK(a.atoms()[0].s == 0.5);
  CHECK(a.atoms()[0].w == 1.0);
  const Measure d = image_reciprocal(Measure::density(SmoothDensity::power_law(1, 0), 1.0, 2.0));
  REQUIRE(d.pieces().size() == 1);
  CHECK(d.pieces()[0].a == doctest::Approx(0.5));
  CHECK(d.pieces()[0].b == doctest::Approx(1.0));
  CHECK(d.density_at(0, 0.8) == doctest::Approx(1.0 / 0.64));
  CHECK(moment(d, 0) == doctest::Approx(1.0).epsilon(1e-10));
  const Measure back = image_reciprocal(d);
  for (double u : {1.0, 1.25, 1.5, 1.9}) {
    MeasureIntegral from_u;
    from_u.from = u;
    const double orig =
        integrate_against(
            Measure::density(SmoothDensity::power_law(1, 0), 1.0, 2.0), [](double) { return 1.0; }, from_u)
            .value;
    const double round = integrate_against(back, [](double) { return 1.0; }, from_u).value;
    CHECK(std::abs(orig - round) <= 1e-10);
  }
}

TEST_CASE("scan grid") {
  const ScanGrid g = ScanGrid::standard();
  CHECK(g.points.size() == 64);
  CHECK(g.points.front() == doctest::Approx(1e-3));
  CHECK(g.points.back() == doctest::Approx(1e3));
  CHECK(g.tolerance == 1e-9);
  ScanGrid bad{{1.0, 0.5}, 1e-9};
  CHECK_THROWS_AS(bad.validate(), DomainError);
}
