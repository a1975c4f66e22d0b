#pragma once

#include <cmath>

namespace gsf::detail {

// Aitken delta-squared extrapolation of a0, a1, a2; falls back to a2 when
// the second difference vanishes or the correction is not trustworthy.
inline double aitken(double a0, double a1, double a2) {
  const double d1 = a1 - a0;
  const double d2 = a2 - a1;
  const double denom = d2 - d1;
  if (denom == 0.0 || !std::isfinite(denom)) return a2;
  const double corr = d2 * d2 / denom;
  if (!std::isfinite(corr) || std::abs(corr) > 10.0 * std::abs(d2) + 1e-300) return a2;
  return a2 - corr;
}

}  // namespace gsf::detail
