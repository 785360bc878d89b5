#include "gpid/circle.hpp"

#include "gpid/error.hpp"

#include <cmath>

namespace gpid {

double wrap_angle(double x) {
  if (!std::isfinite(x)) {
    throw InvalidArgument("wrap_angle: angle is not finite");
  }
  // std::remainder lands in [-pi, pi]; the seam belongs to +pi.
  double r = std::remainder(x, kTwoPi);
  if (r <= -kPi) {
    r += kTwoPi;
  }
  if (r > kPi) {
    r = kPi;
  }
  return r;
}

Angle compose(Angle a, Angle b) { return Angle(a.value() + b.value()); }

Angle inverse(Angle a) { return Angle(-a.value()); }

double angle_difference(Angle a, Angle b) { return wrap_angle(a.value() - b.value()); }

bool angles_equal(Angle a, Angle b, double tol) {
  return std::abs(angle_difference(a, b)) <= tol;
}

double potential_phi(double theta, double target) {
  const double s = std::sin(0.5 * (theta - target));
  return s * s;
}

double grad_phi(double theta, double target) { return 0.5 * std::sin(theta - target); }

double hess_phi(double theta, double target) { return 0.5 * std::cos(theta - target); }

}  // namespace gpid
