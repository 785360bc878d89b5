#pragma once

// Planar steering-controlled vehicle moving at a fixed body-frame velocity,
// with the nominal circle-tracking controller.
//
// Orientations are stored as headings: planar rotations commute, so
// R(a) R(b) = R(a + b) replaces every 2x2 matrix product.

#include "gpid/circle.hpp"
#include "gpid/ode.hpp"

#include <Eigen/Core>

#include <string>
#include <vector>

namespace gpid {

using Vec2 = Eigen::Vector2d;

/// Rotation matrix R(angle).
Eigen::Matrix2d rotation(double angle);

/// Q_{pi/2} v = (-v_y, v_x).
inline Vec2 quarter_turn(const Vec2& v) { return {-v.y(), v.x()}; }

struct Pose {
  Angle heading;
  Vec2 p = Vec2::Zero();
};

struct PoseRate {
  double heading = 0.0;
  Vec2 p = Vec2::Zero();
};

/// Constant translation velocity in the body frame. The nominal model assumes
/// e1; a magnitude other than one is a magnitude bias, a direction other than
/// e1 is a misalignment.
class BodyVelocity {
 public:
  explicit BodyVelocity(Vec2 v);
  static BodyVelocity from_polar(double norm, double misalignment);

  const Vec2& vector() const noexcept { return v_; }
  double norm() const noexcept { return v_.norm(); }
  /// atan2(v_y, v_x).
  double misalignment() const noexcept;

 private:
  Vec2 v_;
};

/// Circular reference of rate omega0 > 0 about a fixed center. The center is
/// the primary datum; the reference position is derived from it.
struct Reference {
  double omega0 = 1.0;
  Vec2 center = Vec2::Zero();
  Angle phase0;
};

void validate(const Reference& ref);

/// dheading/dt = omega_cmd, dp/dt = R(heading) v.
PoseRate vehicle_field(const Pose& pose, double omega_cmd, const BodyVelocity& v);

/// Reference pose at time t: heading phase0 + omega0 t and position
/// center - Q_{pi/2} R(heading) e1 / omega0 (nominal velocity e1).
Pose reference_pose(double t, const Reference& ref);

/// Steering correction from the relative pose:
///   k_P e1^T (omega0 Q^T (p - p_r) - Q^T Q_r Q_{pi/2} e1).
double omega_P(const Pose& pose, const Pose& ref_pose, double k_P, double omega0);

/// The same correction written in circle-center coordinates:
///   k_P omega0 e1^T Q^T (c - c_r) - k_P e1^T Q_{pi/2} v,
/// where c is the center computed with the true velocity and omega0.
double omega_P_from_center(const Pose& pose, const Vec2& center, const Vec2& ref_center,
                           const BodyVelocity& v, double k_P, double omega0);

/// Center of the circle traced when holding rate `omega`: p + Q_{pi/2} R v / omega.
/// Throws InvalidArgument when omega == 0.
Vec2 circle_center(const Pose& pose, const BodyVelocity& v, double omega);

/// 1/2 |c - c_r|^2.
double lyapunov_center(const Vec2& c, const Vec2& c_r);

struct ResidualOmega {
  double plus = 0.0;
  double minus = 0.0;
  double discriminant = 0.0;
};

/// Nonzero steady steering correction under misalignment, the roots of
///   w (omega0 + w) = omega0 k_P |v| sin(phi).
/// The plus branch is the one observed in closed loop. Throws NumericalError
/// when the discriminant is negative.
ResidualOmega predicted_residual_omega(double omega0, double k_P, double v_norm,
                                       double misalignment);

struct NominalConfig {
  BodyVelocity v{Vec2(1.0, 0.1)};
  Reference ref;
  double k_P = 1.0;
  Pose init;
  double t_end = 200.0;
  double h = kDefaultStep;
};

void validate(const NominalConfig& cfg);

struct NominalRun {
  /// States (heading, p_x, p_y); monitors V_center, omega_P, c_dist, chat_dist.
  /// chat_dist uses omega0 plus the predicted plus-branch residual rate.
  Trajectory trajectory;
  bool has_prediction = false;
  ResidualOmega prediction;
  std::vector<std::string> warnings;
};

/// Closed loop omega = omega0 + omega_P.
NominalRun simulate_nominal(const NominalConfig& cfg);

/// Unpacks (heading, p_x, p_y, ...) into a pose.
Pose pose_from_state(const StateVector& x);

}  // namespace gpid
