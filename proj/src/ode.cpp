#include "gpid/ode.hpp"

#include "gpid/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gpid {

namespace {

void require_finite(const StateVector& v, double t, std::size_t step, const char* what) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) {
      std::ostringstream msg;
      msg << what << " is not finite at t=" << t << ", component " << i;
      throw IntegrationError(msg.str(), t, static_cast<std::size_t>(i), step);
    }
  }
}

StateVector rk4_step_impl(const VectorField& field, const StateVector& x, double t, double h,
                          std::size_t step) {
  const StateVector k1 = field(t, x);
  require_finite(k1, t, step, "field evaluation");
  const StateVector k2 = field(t + 0.5 * h, x + 0.5 * h * k1);
  require_finite(k2, t + 0.5 * h, step, "field evaluation");
  const StateVector k3 = field(t + 0.5 * h, x + 0.5 * h * k2);
  require_finite(k3, t + 0.5 * h, step, "field evaluation");
  const StateVector k4 = field(t + h, x + h * k3);
  require_finite(k4, t + h, step, "field evaluation");
  return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

bool Trajectory::has_monitor(const std::string& name) const noexcept {
  return std::find(monitor_names.begin(), monitor_names.end(), name) != monitor_names.end();
}

const std::vector<double>& Trajectory::monitor(const std::string& name) const {
  const auto it = std::find(monitor_names.begin(), monitor_names.end(), name);
  if (it == monitor_names.end()) {
    throw InvalidArgument("trajectory has no monitor named '" + name + "'");
  }
  return monitor_values[static_cast<std::size_t>(it - monitor_names.begin())];
}

std::vector<double> Trajectory::series(const std::string& name) const {
  const auto it = std::find(state_names.begin(), state_names.end(), name);
  if (it == state_names.end()) return monitor(name);
  const auto col = static_cast<Eigen::Index>(it - state_names.begin());
  std::vector<double> out;
  out.reserve(states.size());
  for (const auto& s : states) out.push_back(s[col]);
  return out;
}

StateVector rk4_step(const VectorField& field, const StateVector& x, double t, double h) {
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw InvalidArgument("rk4_step: step size must be positive and finite");
  }
  return rk4_step_impl(field, x, t, h, 0);
}

Trajectory integrate(const VectorField& field, const StateVector& x0, double t0, double t1,
                     double h, const std::vector<Monitor>& monitors,
                     std::vector<std::string> state_names) {
  if (!std::isfinite(t0) || !std::isfinite(t1) || !(t1 > t0)) {
    throw InvalidArgument("integrate: require finite t0 < t1");
  }
  if (!(h > 0.0) || !std::isfinite(h) || h > t1 - t0) {
    throw InvalidArgument("integrate: require 0 < h <= t1 - t0");
  }
  if (!state_names.empty() && state_names.size() != static_cast<std::size_t>(x0.size())) {
    throw InvalidArgument("integrate: state_names does not match the state dimension");
  }
  if (!x0.allFinite()) throw InvalidArgument("integrate: initial state is not finite");

  const auto steps = static_cast<std::size_t>(std::llround((t1 - t0) / h));

  Trajectory traj;
  traj.state_names = std::move(state_names);
  traj.times.reserve(steps + 1);
  traj.states.reserve(steps + 1);
  for (const auto& m : monitors) {
    traj.monitor_names.push_back(m.name);
    traj.monitor_values.emplace_back().reserve(steps + 1);
  }

  auto record = [&](double t, const StateVector& x) {
    traj.times.push_back(t);
    traj.states.push_back(x);
    for (std::size_t i = 0; i < monitors.size(); ++i) {
      traj.monitor_values[i].push_back(monitors[i].eval(t, x));
    }
  };

  StateVector x = x0;
  record(t0, x);
  for (std::size_t k = 0; k < steps; ++k) {
    // Times are computed from the index so they stay exactly uniform.
    const double t = t0 + static_cast<double>(k) * h;
    x = rk4_step_impl(field, x, t, h, k);
    record(t0 + static_cast<double>(k + 1) * h, x);
  }
  return traj;
}

}  // namespace gpid
