#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "gsf/density.hpp"
#include "gsf/quadrature.hpp"

namespace gsf {

enum class Verdict { pass, fail, inconclusive };
const char* to_string(Verdict v);

struct Atom {
  double s;
  double w;
};

struct DensityPiece {
  double a;  // >= 0
  double b;  // may be +inf
  SmoothDensity density;
};

// Atoms plus piecewise-smooth density on (0, inf). Weights and densities may
// be signed (derived measures are); ingestion checks positivity separately.
class Measure {
 public:
  Measure() = default;
  // Throws DomainError for s <= 0, a < 0, a >= b or overlapping pieces.
  Measure(std::vector<Atom> atoms, std::vector<DensityPiece> pieces);

  static Measure atom(double s, double w = 1.0);
  static Measure density(SmoothDensity w, double a = 0.0, double b = std::numeric_limits<double>::infinity());

  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  const std::vector<DensityPiece>& pieces() const noexcept { return pieces_; }
  bool empty() const noexcept { return atoms_.empty() && pieces_.empty(); }
  bool has_atoms() const noexcept { return !atoms_.empty(); }
  bool has_density() const noexcept { return !pieces_.empty(); }

  // Smallest max_order over the pieces (INT_MAX when there are none).
  int max_order() const;
  Provenance provenance() const;
  // Atom locations and finite positive piece endpoints, sorted.
  std::vector<double> breakpoints() const;
  // Density value w(s) summed over pieces containing s (0 outside the support).
  double density_at(int j, double s) const;

  Measure operator+(const Measure& other) const;
  Measure scaled(double c) const;
  // Multiplies the measure by coef * s^q (atoms reweighted, densities wrapped).
  Measure power_weighted(double q, double coef = 1.0) const;

  std::string describe() const;

 private:
  std::vector<Atom> atoms_;
  std::vector<DensityPiece> pieces_;
};

struct ScanGrid {
  std::vector<double> points;
  double tolerance = 1e-9;

  static ScanGrid log_spaced(double lo, double hi, int n, double tolerance = 1e-9);
  static ScanGrid standard() { return log_spaced(1e-3, 1e3, 64); }
  void validate() const;  // throws DomainError
};

// Quadrature target for densities whose derivatives come from finite differences.
inline constexpr double kFiniteDifferenceRelTol = 1e-6;

struct MeasureIntegral {
  double from = 0.0;  // open at `from`: atoms at exactly `from` are excluded
  double to = std::numeric_limits<double>::infinity();
  double exponent_at_zero = 0.0;  // behavior of the test function g at 0
  std::vector<double> breakpoints;
  bool probe_divergence = false;
  quad::Options quad;
};

// int g dmu over (from, to]. Status divergent yields value = +inf.
quad::RangeResult integrate_against(const Measure& mu, const std::function<double(double)>& g,
                                    const MeasureIntegral& spec = {});

// int s^k dmu; +inf when the integral diverges.
double moment(const Measure& mu, int k);

// mu_k = (-1)^k s^k d^k mu. Density pieces map to derived densities; jumps of
// w^{(k-1)} at interior piece boundaries become atoms, lower-order jumps and
// explicit atoms raise NotAMeasureError.
Measure derived_measure(const Measure& mu, int k);

struct PositivityReport {
  Verdict verdict = Verdict::inconclusive;
  double min_value = 0.0;
  double witness = 0.0;  // location of min_value
  int points_checked = 0;
  std::string note;
};

PositivityReport positivity_scan(const Measure& mu, const ScanGrid& grid);

// int_{(u, inf)} s^{-lam} dmu; +inf on divergence.
double tail_power_integral(const Measure& mu, double lam, double u);

struct Admissibility {
  bool admissible = false;
  double mass_near_zero = 0.0;  // int_(0,1] dmu
  double tail = 0.0;            // int_(1,inf) t^{-lam} dmu
  std::string diagnostics;
};

Admissibility levy_admissibility(const Measure& mu, double lam);

// Push-forward under s -> 1/s.
Measure image_reciprocal(const Measure& mu);

}  // namespace gsf
