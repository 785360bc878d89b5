#include "gpid/vehicle_integral.hpp"

#include "gpid/error.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace gpid {

IntegralCommand omega_with_integral(const Pose& pose, const Pose& ref_pose, double omega_I,
                                    double k_P, double k_I, double omega0) {
  const double wp = omega_P(pose, ref_pose, k_P, omega0);
  const double d = wp - k_I * omega_I;
  return {omega0 + d, d};
}

void validate(const IntegralParams& p) {
  if (!(p.omega0 > 0.0) || !std::isfinite(p.omega0)) throw InvalidArgument("omega_0 must be > 0");
  if (!(p.k_P > 0.0) || !std::isfinite(p.k_P)) throw InvalidArgument("k_P must be > 0");
  if (!(p.k_I > 0.0) || !std::isfinite(p.k_I)) throw InvalidArgument("k_I must be > 0");
}

namespace {

double bracket(const Vec2& x, double omega_I, const IntegralParams& p) {
  // -k_P e1^T Q_{pi/2} v = +k_P v_y
  return p.k_P * p.omega0 * x.x() + p.k_P * p.v.vector().y() - p.k_I * omega_I;
}

}  // namespace

RotatingFrameState rotating_frame_field(const RotatingFrameState& s, const IntegralParams& p) {
  const double b = bracket(s.x, s.omega_I, p);
  const double omega = p.omega0 + b;
  return {-(b / p.omega0) * p.v.vector() - omega * quarter_turn(s.x), b};
}

StateVector rotating_frame_field(const StateVector& s, const IntegralParams& p) {
  const RotatingFrameState d = rotating_frame_field(RotatingFrameState{Vec2(s[0], s[1]), s[2]}, p);
  StateVector out(3);
  out << d.x.x(), d.x.y(), d.omega_I;
  return out;
}

double equilibrium_omega_I(const IntegralParams& p) {
  return -(p.k_P / p.k_I) * quarter_turn(p.v.vector()).x();
}

StateVector rotating_frame_equilibrium(const IntegralParams& p) {
  StateVector e(3);
  e << 0.0, 0.0, equilibrium_omega_I(p);
  return e;
}

Cubic char_poly_coeffs(double omega0, double k_P, double k_I, double v_norm,
                       double misalignment) {
  const double c = std::cos(misalignment);
  const double s = std::sin(misalignment);
  return {k_I + v_norm * k_P * c, omega0 * omega0 + omega0 * v_norm * k_P * s,
          k_I * omega0 * omega0};
}

Eigen::Matrix3d linearization_jacobian(const IntegralParams& p, double h) {
  validate(p);
  const Eigen::MatrixXd j = finite_diff_jacobian(
      [&p](const StateVector& s) { return rotating_frame_field(s, p); },
      rotating_frame_equilibrium(p), h);
  return j;
}

RouthReport routh_hurwitz_stable(double omega0, double k_P, double k_I, double v_norm,
                                 double misalignment) {
  RouthReport r;
  const double s = std::abs(std::sin(misalignment));
  const double c = std::cos(misalignment);
  r.bound1_margin = omega0 - k_P * v_norm * s;
  r.bound2_margin = omega0 * c - k_I * s - v_norm * k_P * std::abs(s * c);
  r.sufficient_applicable = std::abs(misalignment) < std::numbers::pi / 2.0;
  r.sufficient_ok = r.sufficient_applicable && r.bound1_margin > 0.0 && r.bound2_margin > 0.0;
  r.poly = char_poly_coeffs(omega0, k_P, k_I, v_norm, misalignment);
  r.hurwitz_margin = r.poly.a2 * r.poly.a1 - r.poly.a0;
  r.exact_ok = routh_hurwitz_cubic(r.poly);
  return r;
}

void validate(const IntegralConfig& cfg) {
  validate(cfg.ref);
  if (!(cfg.k_P > 0.0) || !std::isfinite(cfg.k_P)) {
    throw InvalidArgument("vehicle-integral: k_P must be > 0");
  }
  if (!(cfg.k_I > 0.0) || !std::isfinite(cfg.k_I)) {
    throw InvalidArgument("vehicle-integral: k_I must be > 0");
  }
  if (!(cfg.t_end > 0.0) || !std::isfinite(cfg.t_end)) {
    throw InvalidArgument("vehicle-integral: t_end must be > 0");
  }
  if (!(cfg.h > 0.0) || cfg.h > cfg.t_end) {
    throw InvalidArgument("vehicle-integral: require 0 < h <= t_end");
  }
  if (!cfg.init.p.allFinite() || !std::isfinite(cfg.omega_I0)) {
    throw InvalidArgument("vehicle-integral: initial state must be finite");
  }
}

IntegralRun simulate_integral(const IntegralConfig& cfg) {
  validate(cfg);
  const BodyVelocity v = cfg.v;
  const Reference ref = cfg.ref;
  const double k_P = cfg.k_P;
  const double k_I = cfg.k_I;
  const double w0 = ref.omega0;

  IntegralRun run;
  run.omega_I_equilibrium = equilibrium_omega_I({w0, k_P, k_I, v});
  run.routh = routh_hurwitz_stable(w0, k_P, k_I, v.norm(), v.misalignment());
  if (!run.routh.exact_ok) {
    std::ostringstream msg;
    msg << "linearization at the target is not Hurwitz (a2 a1 - a0 = " << run.routh.hurwitz_margin
        << ")";
    run.warnings.push_back(msg.str());
  } else if (!run.routh.sufficient_ok) {
    run.warnings.push_back("gains violate the small-gain bounds; stability rests on the exact "
                           "Routh-Hurwitz test only");
  }

  auto command = [=](double t, const StateVector& x) {
    return omega_with_integral(pose_from_state(x), reference_pose(t, ref), x[3], k_P, k_I, w0);
  };

  auto field = [=](double t, const StateVector& x) {
    const IntegralCommand cmd = command(t, x);
    const PoseRate r = vehicle_field(pose_from_state(x), cmd.omega_cmd, v);
    StateVector dx(4);
    dx << r.heading, r.p.x(), r.p.y(), cmd.d_omega_I;
    return dx;
  };

  std::vector<Monitor> monitors{
      {"c_dist",
       [=](double, const StateVector& x) {
         return (circle_center(pose_from_state(x), v, w0) - ref.center).norm();
       }},
      {"omega_cmd", [=](double t, const StateVector& x) { return command(t, x).omega_cmd; }},
      {"omega_P",
       [=](double t, const StateVector& x) {
         return omega_P(pose_from_state(x), reference_pose(t, ref), k_P, w0);
       }},
  };

  StateVector x0(4);
  x0 << cfg.init.heading.value(), cfg.init.p.x(), cfg.init.p.y(), cfg.omega_I0;
  run.trajectory = integrate(field, x0, 0.0, cfg.t_end, cfg.h, monitors,
                             {"heading", "p_x", "p_y", "omega_I"});
  return run;
}

RotatingFrameState to_rotating_frame(const StateVector& full, const BodyVelocity& v,
                                     const Reference& ref) {
  const Pose pose = pose_from_state(full);
  const Vec2 c = circle_center(pose, v, ref.omega0) - ref.center;
  return {rotation(pose.heading.value()).transpose() * c, full[3]};
}

}  // namespace gpid
