#pragma once

#include "gpid/circle.hpp"
#include "gpid/ode.hpp"
#include "gpid/pid.hpp"

#include <string>
#include <vector>

namespace gpid {

/// Gravity torque -w sin(theta), treated as an unknown state-dependent bias.
double pendulum_bias(double theta, double w);

/// Bias model for gravity with slope bounds d_r = d_c = w.
BiasModel pendulum_bias_model(double w);

struct PendulumConfig {
  double w = 1.0;
  double b = 100.0;
  Angle theta_target{kPi / 2.0};
  Gains gains = make_gains(1000.0, 1.0, 600.0, 1.0 / 101000.0);
  double theta0 = 0.0;
  double omega0 = 0.0;
  double u_I0 = 0.0;
  double t_end = 50.0;
  double h = kDefaultStep;
};

void validate(const PendulumConfig& cfg);

struct PendulumRun {
  /// States (theta, omega, u_I); monitors V, theta_err, kI_uI_plus_uB.
  /// The angular velocity series is the omega state column.
  Trajectory trajectory;
  /// Gain certificate with d_r = d_c = w. A failed certificate is reported as
  /// a warning only; the tuning rule is sufficient, not necessary.
  Cond2Report cond2;
  std::vector<std::string> warnings;
};

PendulumRun simulate_pendulum(const PendulumConfig& cfg);

}  // namespace gpid
