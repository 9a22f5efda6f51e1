#pragma once

#include <cmath>

namespace circlestab {

// Points on the circle R/Z are stored as their canonical representative in [0, 1).
using CirclePoint = double;

// Canonical representative of x + Z in [0, 1).
inline double wrap_unit(double x) {
  double r = x - std::floor(x);
  if (r >= 1.0) r -= 1.0;  // guards x = -eps rounding to 1.0
  if (r < 0.0) r += 1.0;
  return r;
}

// Geodesic distance on R/Z; always in [0, 1/2].
inline double cyclic_distance(double x, double y) {
  double d = wrap_unit(x - y);
  return d <= 0.5 ? d : 1.0 - d;
}

// Arc length travelled moving forward (increasing x) from x to y; in [0, 1).
inline double forward_gap(double x, double y) { return wrap_unit(y - x); }

}  // namespace circlestab
