#pragma once

#include <cmath>
#include <numbers>

namespace rig {

inline constexpr double kPi = std::numbers::pi;

/// Wraps an angle to (-pi, pi].
inline double wrap_angle(double a) {
  double w = std::remainder(a, 2.0 * kPi);  // [-pi, pi]
  if (w <= -kPi) w += 2.0 * kPi;
  return w;
}

/// sin(x)/x with sinc(0) = 1.
inline double sinc(double x) {
  if (x == 0.0) return 1.0;
  return std::sin(x) / x;
}

inline double deg_to_rad(double d) { return d * kPi / 180.0; }
inline double rad_to_deg(double r) { return r * 180.0 / kPi; }

}  // namespace rig
