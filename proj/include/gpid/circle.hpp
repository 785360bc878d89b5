#pragma once

#include <numbers>

namespace gpid {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Tolerance for angle equality, applied to the wrapped difference.
inline constexpr double kAngleTolerance = 1e-12;

/// Map a finite real to its representative in (-pi, pi]. Throws
/// InvalidArgument on non-finite input.
double wrap_angle(double x);

/// Element of the circle group S^1, stored as its canonical angle in (-pi, pi].
class Angle {
 public:
  constexpr Angle() = default;
  explicit Angle(double radians) : value_(wrap_angle(radians)) {}

  double value() const noexcept { return value_; }

  static Angle identity() noexcept { return Angle(); }

 private:
  double value_ = 0.0;
};

Angle compose(Angle a, Angle b);
Angle inverse(Angle a);

/// Signed difference a - b, wrapped into (-pi, pi].
double angle_difference(Angle a, Angle b);

/// Equality up to kAngleTolerance on the wrapped difference.
bool angles_equal(Angle a, Angle b, double tol = kAngleTolerance);

/// Target-shaping potential sin^2((theta - target) / 2): zero at the target,
/// one at the antipode.
double potential_phi(double theta, double target);
inline double potential_phi(Angle theta, Angle target) {
  return potential_phi(theta.value(), target.value());
}

/// d(potential_phi)/d(theta) = sin(theta - target) / 2.
double grad_phi(double theta, double target);
inline double grad_phi(Angle theta, Angle target) {
  return grad_phi(theta.value(), target.value());
}

/// d^2(potential_phi)/d(theta)^2 = cos(theta - target) / 2.
double hess_phi(double theta, double target);

}  // namespace gpid
