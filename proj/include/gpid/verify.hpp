#pragma once

// Numerical checks shared by the tests, the acceptance suite and the
// `verify` subcommand. Tolerances are always supplied by the caller.

#include "gpid/ode.hpp"

#include <Eigen/Core>

#include <array>
#include <cstddef>
#include <functional>
#include <span>

namespace gpid {

struct MonotoneReport {
  bool passed = false;
  /// Largest increase series[k+1] - series[k] (negative for a strictly
  /// decreasing series).
  double worst_violation = 0.0;
  /// k of the worst pair (k, k+1).
  std::size_t worst_index = 0;
};

/// Passes iff series[k+1] - series[k] <= tol for every k. Requires at least
/// two samples and tol >= 0.
MonotoneReport check_monotone_nonincreasing(std::span<const double> series, double tol);

using AutonomousField = std::function<StateVector(const StateVector&)>;

/// Central-difference Jacobian, column j from +/- h along coordinate j.
Eigen::MatrixXd finite_diff_jacobian(const AutonomousField& field, const StateVector& x,
                                     double h);

/// Symmetric 2x2 test via trace < 0 and det > 0. Throws InvalidArgument if
/// the off-diagonal entries differ by more than 1e-12.
bool is_negative_definite(const Eigen::Matrix2d& m);

/// Monic cubic lambda^3 + a2 lambda^2 + a1 lambda + a0.
struct Cubic {
  double a2 = 0.0;
  double a1 = 0.0;
  double a0 = 0.0;
};

/// Characteristic polynomial det(lambda I - m) of a 3x3 matrix.
Cubic characteristic_polynomial(const Eigen::Matrix3d& m);

/// Real parts of the three roots, sorted descending (a complex pair appears
/// twice). Closed form: Cardano when the discriminant is clearly positive,
/// otherwise the trigonometric form.
std::array<double, 3> cubic_real_parts(double a2, double a1, double a0);
inline std::array<double, 3> cubic_real_parts(const Cubic& c) {
  return cubic_real_parts(c.a2, c.a1, c.a0);
}

/// Routh-Hurwitz for the monic cubic: a2 > 0, a0 > 0 and a2 a1 > a0.
bool routh_hurwitz_cubic(const Cubic& c);

}  // namespace gpid
