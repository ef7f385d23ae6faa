#pragma once

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace regula {

/// Absolute floor plus relative slack for quantities that are zero (or
/// nonpositive) in exact arithmetic. `scale` aggregates the squared
/// magnitudes entering the computation.
inline double zero_tol(double scale, double rel = 1e-10) {
  return 1e-12 + rel * scale;
}

/// Ceiling of a floating-point ratio with an integer guard: values within
/// 1e-9 relative of an integer are snapped to it before the ceiling is
/// taken. Decimal inputs such as 0.1 otherwise land imperceptibly above an
/// integer and inflate the result by a whole step.
inline long long ceil_guarded(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("ceil_guarded: value is not finite");
  if (x > 9.0e15) throw std::out_of_range("ceil_guarded: value exceeds the supported integer range");
  const double snapped = std::nearbyint(x);
  if (std::fabs(x - snapped) <= 1e-9 * std::max(1.0, std::fabs(x))) {
    return static_cast<long long>(snapped);
  }
  return static_cast<long long>(std::ceil(x));
}

/// Shortest double formatting that survives a parse round trip.
inline std::string fmt_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace regula
