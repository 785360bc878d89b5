#pragma once

// Integral action for the steering-controlled vehicle under velocity
// misalignment. The integrator has reversed sign and integrates every
// applied correction, including its own contribution:
//
//   omega      = omega0 + omega_P - k_I omega_I
//   d omega_I  = omega_P - k_I omega_I
//
// so omega equals omega0 whenever the integrator is at rest.

#include "gpid/ode.hpp"
#include "gpid/vehicle.hpp"
#include "gpid/verify.hpp"

#include <Eigen/Core>

#include <array>
#include <string>
#include <vector>

namespace gpid {

struct IntegralCommand {
  double omega_cmd = 0.0;
  double d_omega_I = 0.0;
};

IntegralCommand omega_with_integral(const Pose& pose, const Pose& ref_pose, double omega_I,
                                    double k_P, double k_I, double omega0);

struct IntegralVehicleState {
  Pose pose;
  double omega_I = 0.0;
};

/// Closed loop in a frame turning with the vehicle, with the reference center
/// at the origin: x = Q^T c.
struct RotatingFrameState {
  Vec2 x = Vec2::Zero();
  double omega_I = 0.0;
};

/// Parameters shared by the rotating-frame model and its linearization.
struct IntegralParams {
  double omega0 = 1.0;
  double k_P = 1.0;
  double k_I = 0.1;
  BodyVelocity v{Vec2(1.0, 0.1)};
};

void validate(const IntegralParams& p);

/// Derivative of (x_1, x_2, omega_I) with
///   B = k_P omega0 e1^T x - k_P e1^T Q_{pi/2} v - k_I omega_I,
///   x' = -(v / omega0) B - (omega0 + B) Q_{pi/2} x,   omega_I' = B.
StateVector rotating_frame_field(const StateVector& s, const IntegralParams& p);
RotatingFrameState rotating_frame_field(const RotatingFrameState& s, const IntegralParams& p);

/// Integrator value at the target equilibrium: (k_P / k_I) |v| sin(phi).
double equilibrium_omega_I(const IntegralParams& p);

/// Equilibrium (0, 0, equilibrium_omega_I) of the rotating-frame field.
StateVector rotating_frame_equilibrium(const IntegralParams& p);

/// Coefficients of the linearization's characteristic polynomial
///   lambda^3 + (k_I + |v| k_P cos phi) lambda^2
///            + (omega0^2 + omega0 |v| k_P sin phi) lambda + k_I omega0^2.
Cubic char_poly_coeffs(double omega0, double k_P, double k_I, double v_norm, double misalignment);

/// Central-difference Jacobian of rotating_frame_field at the equilibrium.
Eigen::Matrix3d linearization_jacobian(const IntegralParams& p, double h = 1e-6);

struct RouthReport {
  /// False when phi is outside (-pi/2, pi/2); sufficient_ok is then false.
  bool sufficient_applicable = false;
  bool sufficient_ok = false;
  bool exact_ok = false;
  /// omega0 - k_P |v| |sin phi|.
  double bound1_margin = 0.0;
  /// omega0 cos phi - k_I |sin phi| - |v| k_P |sin phi cos phi|.
  double bound2_margin = 0.0;
  Cubic poly;
  /// a2 a1 - a0.
  double hurwitz_margin = 0.0;
};

/// Small-gain sufficient bounds and the exact Routh-Hurwitz verdict. The
/// sufficient bounds imply the exact verdict.
RouthReport routh_hurwitz_stable(double omega0, double k_P, double k_I, double v_norm,
                                 double misalignment);

struct IntegralConfig {
  BodyVelocity v{Vec2(1.0, 0.1)};
  Reference ref;
  double k_P = 1.0;
  double k_I = 0.1;
  Pose init;
  double omega_I0 = 0.0;
  double t_end = 200.0;
  double h = kDefaultStep;
};

void validate(const IntegralConfig& cfg);

struct IntegralRun {
  /// States (heading, p_x, p_y, omega_I); monitors c_dist, omega_cmd,
  /// omega_P.
  Trajectory trajectory;
  double omega_I_equilibrium = 0.0;
  RouthReport routh;
  std::vector<std::string> warnings;
};

IntegralRun simulate_integral(const IntegralConfig& cfg);

/// Maps a full-frame state (heading, p_x, p_y, omega_I) to the rotating frame
/// relative to the reference center: x = Q^T (c - c_r).
RotatingFrameState to_rotating_frame(const StateVector& full, const BodyVelocity& v,
                                     const Reference& ref);

}  // namespace gpid
