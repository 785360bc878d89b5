#include "gpid/pendulum.hpp"

#include "gpid/error.hpp"

#include <cmath>
#include <sstream>

namespace gpid {

double pendulum_bias(double theta, double w) { return -w * std::sin(theta); }

BiasModel pendulum_bias_model(double w) {
  BiasModel m;
  m.value = [w](double theta) { return -w * std::sin(theta); };
  m.slope = [w](double theta) { return -w * std::cos(theta); };
  m.d_r = w;
  m.d_c = w;
  return m;
}

void validate(const PendulumConfig& cfg) {
  if (!(cfg.w >= 0.0) || !std::isfinite(cfg.w)) throw InvalidArgument("pendulum: w must be >= 0");
  if (!std::isfinite(cfg.b)) throw InvalidArgument("pendulum: b must be finite");
  if (!(cfg.t_end > 0.0) || !std::isfinite(cfg.t_end)) {
    throw InvalidArgument("pendulum: t_end must be > 0");
  }
  if (!(cfg.h > 0.0) || cfg.h > cfg.t_end) throw InvalidArgument("pendulum: require 0 < h <= t_end");
  if (!std::isfinite(cfg.theta0) || !std::isfinite(cfg.omega0) || !std::isfinite(cfg.u_I0)) {
    throw InvalidArgument("pendulum: initial state must be finite");
  }
  validate(cfg.gains);
}

PendulumRun simulate_pendulum(const PendulumConfig& cfg) {
  validate(cfg);
  const Gains g = cfg.gains;
  const Angle target = cfg.theta_target;
  const BiasModel bias = pendulum_bias_model(cfg.w);

  PendulumRun run;
  run.cond2 = check_cond2(g.k_I, g.k_D, cfg.b, g.k_P, g.beta, bias.d_r, bias.d_c);
  if (!run.cond2.passed) {
    std::ostringstream msg;
    msg << "gains do not satisfy the Gershgorin conditions for w=" << cfg.w
        << " (k_I margin " << run.cond2.k_I_margin << ", k_D margin " << run.cond2.k_D_margin
        << "); convergence is not certified";
    run.warnings.push_back(msg.str());
  }

  std::vector<Monitor> monitors{
      {"V",
       [=](double, const StateVector& x) {
         return lyapunov_second_order({Angle(x[0]), x[1], x[2]}, g, bias, target);
       }},
      {"theta_err",
       [=](double, const StateVector& x) { return wrap_angle(x[0] - target.value()); }},
      {"kI_uI_plus_uB",
       [=](double, const StateVector& x) { return g.k_I * x[2] + bias(x[0]); }},
  };

  StateVector x0(3);
  x0 << cfg.theta0, cfg.omega0, cfg.u_I0;
  run.trajectory = integrate(closed_loop_field_second_order(g, cfg.b, bias, target), x0, 0.0,
                             cfg.t_end, cfg.h, monitors, {"theta", "omega", "u_I"});
  return run;
}

}  // namespace gpid
