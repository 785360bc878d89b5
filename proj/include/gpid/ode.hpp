#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace gpid {

using StateVector = Eigen::VectorXd;

/// Time-dependent vector field dx/dt = f(t, x).
using VectorField = std::function<StateVector(double t, const StateVector& x)>;

/// A scalar quantity sampled along a trajectory (Lyapunov value, errors, ...).
struct Monitor {
  std::string name;
  std::function<double(double t, const StateVector& x)> eval;
};

/// Uniformly sampled solution of an initial value problem.
///
/// Every monitor series has one entry per stored time; state_names labels the
/// state components for serialization and may be empty.
struct Trajectory {
  std::vector<double> times;
  std::vector<StateVector> states;
  std::vector<std::string> state_names;
  std::vector<std::string> monitor_names;
  std::vector<std::vector<double>> monitor_values;

  std::size_t size() const noexcept { return times.size(); }
  std::size_t dimension() const noexcept {
    return states.empty() ? 0 : static_cast<std::size_t>(states.front().size());
  }

  /// Series for the named monitor; throws InvalidArgument if absent.
  const std::vector<double>& monitor(const std::string& name) const;
  bool has_monitor(const std::string& name) const noexcept;

  /// Copy of a state component or monitor series by column name; throws
  /// InvalidArgument if neither exists.
  std::vector<double> series(const std::string& name) const;

  const StateVector& final_state() const { return states.back(); }
  double final_monitor(const std::string& name) const { return monitor(name).back(); }
};

constexpr double kDefaultStep = 1e-3;

/// One classical fourth-order Runge-Kutta step. Throws IntegrationError if
/// any stage evaluation is not finite.
StateVector rk4_step(const VectorField& field, const StateVector& x, double t, double h);

/// Fixed-step RK4 from t0 to t1, storing the state and every monitor at each
/// accepted step (including the initial point). The number of steps is
/// round((t1 - t0) / h), so the final time lies within h of t1.
Trajectory integrate(const VectorField& field, const StateVector& x0, double t0, double t1,
                     double h, const std::vector<Monitor>& monitors = {},
                     std::vector<std::string> state_names = {});

}  // namespace gpid
