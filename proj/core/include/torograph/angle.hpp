#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace torograph {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Reduces a finite angle in radians into the canonical interval (-pi, pi].
/// Throws std::invalid_argument for non-finite input.
inline double wrap_radians(double x) {
  if (!std::isfinite(x)) {
    throw std::invalid_argument("wrap_radians: input must be finite");
  }
  double r = std::remainder(x, kTwoPi);
  if (r <= -kPi) r += kTwoPi;  // remainder lands in [-pi, pi]; move -pi to pi
  return r;
}

/// An angle in radians, always stored in (-pi, pi].
class Angle {
 public:
  Angle() = default;
  explicit Angle(double radians) : value_(wrap_radians(radians)) {}

  double radians() const { return value_; }

  /// Angle shifted by delta radians, re-wrapped.
  Angle shifted(double delta) const { return Angle(value_ + delta); }

  friend bool operator==(Angle a, Angle b) { return a.value_ == b.value_; }

 private:
  double value_ = 0.0;
};

inline Angle wrap_angle(double x) { return Angle(x); }

/// Geodesic distance on the circle, in [0, pi].
inline double circular_distance(double a, double b) {
  return std::abs(wrap_radians(a - b));
}

inline double circular_distance(Angle a, Angle b) {
  return circular_distance(a.radians(), b.radians());
}

}  // namespace torograph
