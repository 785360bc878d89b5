#include "gpid/vehicle.hpp"

#include "gpid/error.hpp"

#include <cmath>
#include <sstream>
#include <utility>

namespace gpid {

Eigen::Matrix2d rotation(double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  Eigen::Matrix2d r;
  r << c, -s, s, c;
  return r;
}

BodyVelocity::BodyVelocity(Vec2 v) : v_(std::move(v)) {
  if (!v_.allFinite() || !(v_.norm() > 0.0)) {
    throw InvalidArgument("body velocity must be finite and nonzero");
  }
}

BodyVelocity BodyVelocity::from_polar(double norm, double misalignment) {
  return BodyVelocity(Vec2(norm * std::cos(misalignment), norm * std::sin(misalignment)));
}

double BodyVelocity::misalignment() const noexcept { return std::atan2(v_.y(), v_.x()); }

void validate(const Reference& ref) {
  if (!(ref.omega0 > 0.0) || !std::isfinite(ref.omega0)) {
    throw InvalidArgument("reference: omega_0 must be > 0");
  }
  if (!ref.center.allFinite()) throw InvalidArgument("reference: center must be finite");
}

PoseRate vehicle_field(const Pose& pose, double omega_cmd, const BodyVelocity& v) {
  return {omega_cmd, rotation(pose.heading.value()) * v.vector()};
}

Pose reference_pose(double t, const Reference& ref) {
  const double heading = ref.phase0.value() + ref.omega0 * t;
  const Vec2 dir(std::cos(heading), std::sin(heading));
  return {Angle(heading), ref.center - quarter_turn(dir) / ref.omega0};
}

double omega_P(const Pose& pose, const Pose& ref_pose, double k_P, double omega0) {
  const double theta = pose.heading.value();
  // e1^T Q^T (p - p_r)
  const Vec2 d = pose.p - ref_pose.p;
  const double along = std::cos(theta) * d.x() + std::sin(theta) * d.y();
  // e1^T R(theta_r - theta) Q_{pi/2} e1 = -sin(theta_r - theta)
  const double rel = -std::sin(ref_pose.heading.value() - theta);
  return k_P * (omega0 * along - rel);
}

double omega_P_from_center(const Pose& pose, const Vec2& center, const Vec2& ref_center,
                           const BodyVelocity& v, double k_P, double omega0) {
  const double theta = pose.heading.value();
  const Vec2 d = center - ref_center;
  const double along = std::cos(theta) * d.x() + std::sin(theta) * d.y();
  return k_P * omega0 * along - k_P * quarter_turn(v.vector()).x();
}

Vec2 circle_center(const Pose& pose, const BodyVelocity& v, double omega) {
  if (omega == 0.0 || !std::isfinite(omega)) {
    throw InvalidArgument("circle_center: rate must be finite and nonzero");
  }
  return pose.p + quarter_turn(rotation(pose.heading.value()) * v.vector()) / omega;
}

double lyapunov_center(const Vec2& c, const Vec2& c_r) { return 0.5 * (c - c_r).squaredNorm(); }

ResidualOmega predicted_residual_omega(double omega0, double k_P, double v_norm,
                                       double misalignment) {
  ResidualOmega r;
  r.discriminant = omega0 * omega0 / 4.0 + omega0 * k_P * v_norm * std::sin(misalignment);
  if (r.discriminant < 0.0) {
    std::ostringstream msg;
    msg << "residual steering rate has no real solution (discriminant " << r.discriminant
        << ")";
    throw NumericalError(msg.str());
  }
  const double root = std::sqrt(r.discriminant);
  r.plus = -omega0 / 2.0 + root;
  r.minus = -omega0 / 2.0 - root;
  return r;
}

Pose pose_from_state(const StateVector& x) { return {Angle(x[0]), Vec2(x[1], x[2])}; }

void validate(const NominalConfig& cfg) {
  validate(cfg.ref);
  if (!(cfg.k_P > 0.0) || !std::isfinite(cfg.k_P)) throw InvalidArgument("vehicle: k_P must be > 0");
  if (!(cfg.t_end > 0.0) || !std::isfinite(cfg.t_end)) {
    throw InvalidArgument("vehicle: t_end must be > 0");
  }
  if (!(cfg.h > 0.0) || cfg.h > cfg.t_end) throw InvalidArgument("vehicle: require 0 < h <= t_end");
  if (!cfg.init.p.allFinite()) throw InvalidArgument("vehicle: initial position must be finite");
}

NominalRun simulate_nominal(const NominalConfig& cfg) {
  validate(cfg);
  const BodyVelocity v = cfg.v;
  const Reference ref = cfg.ref;
  const double k_P = cfg.k_P;
  const double w0 = ref.omega0;

  NominalRun run;
  double chat_rate = w0;
  try {
    run.prediction = predicted_residual_omega(w0, k_P, v.norm(), v.misalignment());
    run.has_prediction = true;
    chat_rate = w0 + run.prediction.plus;
  } catch (const NumericalError& e) {
    run.warnings.push_back(std::string(e.what()) + "; chat_dist falls back to omega_0");
  }

  auto field = [=](double t, const StateVector& x) {
    const Pose pose = pose_from_state(x);
    const double w = w0 + omega_P(pose, reference_pose(t, ref), k_P, w0);
    const PoseRate r = vehicle_field(pose, w, v);
    StateVector dx(3);
    dx << r.heading, r.p.x(), r.p.y();
    return dx;
  };

  std::vector<Monitor> monitors{
      {"V_center",
       [=](double, const StateVector& x) {
         return lyapunov_center(circle_center(pose_from_state(x), v, w0), ref.center);
       }},
      {"omega_P",
       [=](double t, const StateVector& x) {
         return omega_P(pose_from_state(x), reference_pose(t, ref), k_P, w0);
       }},
      {"c_dist",
       [=](double, const StateVector& x) {
         return (circle_center(pose_from_state(x), v, w0) - ref.center).norm();
       }},
      {"chat_dist",
       [=](double, const StateVector& x) {
         return (circle_center(pose_from_state(x), v, chat_rate) - ref.center).norm();
       }},
  };

  StateVector x0(3);
  x0 << cfg.init.heading.value(), cfg.init.p.x(), cfg.init.p.y();
  run.trajectory =
      integrate(field, x0, 0.0, cfg.t_end, cfg.h, monitors, {"heading", "p_x", "p_y"});
  return run;
}

}  // namespace gpid
