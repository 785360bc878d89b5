#pragma once

// PID control on a one-dimensional Lie group (the circle), with the
// Lyapunov certificate and Gershgorin-based tuning rules that accompany it.

#include "gpid/circle.hpp"
#include "gpid/ode.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <functional>

namespace gpid {

/// Controller gains plus the two Lyapunov weights. alpha is always 1/k_P.
struct Gains {
  double k_P = 0.0;
  double k_I = 0.0;
  double k_D = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
};

/// Builds a Gains record with alpha = 1/k_P; throws InvalidArgument unless
/// every gain and beta is positive and finite.
Gains make_gains(double k_P, double k_I, double k_D, double beta);

/// Throws InvalidArgument if the record violates the Gains invariants.
void validate(const Gains& gains);

/// Actuation bias that depends on the configuration only.
///
/// d_r and d_c bound the row and column sums of |d u_B / d theta|; on the
/// circle both are bounds on the absolute slope. When `slope` is empty the
/// gradient is taken by central differences.
struct BiasModel {
  std::function<double(double theta)> value;
  std::function<double(double theta)> slope;
  double d_r = 0.0;
  double d_c = 0.0;

  double operator()(double theta) const { return value ? value(theta) : 0.0; }
  double gradient(double theta) const;

  static BiasModel none();
  static BiasModel constant(double u);
};

struct SecondOrderState {
  Angle theta;
  double xi = 0.0;
  double u_I = 0.0;
};

struct PidCommand {
  double u = 0.0;
  /// Rate of the integrator: the integral of the P and D commands.
  double du_I = 0.0;
};

PidCommand pid_control(const SecondOrderState& s, const Gains& gains, double grad);

/// Closed loop over (theta, xi, u_I):
///   theta' = xi,  xi' = b xi + u + u_B(theta),  u_I' = -k_P grad - k_D xi.
/// theta is integrated unwrapped; every term is 2*pi periodic in it.
VectorField closed_loop_field_second_order(const Gains& gains, double b, BiasModel bias,
                                           Angle target);

/// V = phi + alpha/2 xi^2 + beta/2 (k_I (u_I - xi) + u_B)^2.
double lyapunov_second_order(const SecondOrderState& s, const Gains& gains,
                             const BiasModel& bias, Angle target);

/// Symmetric matrix M with dV/dt = z^T M z, z = (k_I (u_I - xi) + u_B, xi).
Eigen::Matrix2d quadratic_form_matrix(const Gains& gains, double b, double grad_uB);

/// Analytic dV/dt at a state, evaluated through quadratic_form_matrix.
double lyapunov_rate_second_order(const SecondOrderState& s, const Gains& gains, double b,
                                  const BiasModel& bias, Angle target);

struct Cond2Report {
  bool passed = false;
  double f = 0.0;
  /// k_I - (f + d_r/2); must be strictly positive.
  double k_I_margin = 0.0;
  /// k_D - (b + k_I + k_P f + beta k_P d_c/2); must be strictly positive.
  double k_D_margin = 0.0;
};

/// Gershgorin sufficient conditions for negative definiteness of the
/// quadratic form. Both inequalities are strict, evaluated with no tolerance.
Cond2Report check_cond2(double k_I, double k_D, double b, double k_P, double beta, double d_r,
                        double d_c);

struct TunedGains {
  double k_I = 0.0;
  double k_D = 0.0;
  double beta = 0.0;
};

/// Picks k_I above the slope bound, beta so that f vanishes, then k_D with a
/// multiplicative margin:
///   k_I  = margin * max(d_r/2, -b, kTuneFloor)
///   beta = 1 / (k_P (b + k_I) k_I)
///   k_D  = margin * (b + k_I + beta k_P d_c / 2)
/// Requires k_P > 0, d_r, d_c >= 0, margin > 1.
TunedGains tune_gains_gershgorin(double b, double k_P, double d_r, double d_c, double margin);

inline constexpr double kTuneFloor = 1e-3;

// First-order system --------------------------------------------------------

/// Closed loop over (theta, u_I):
///   theta' = -k_P grad + u_B(theta) + k_I u_I,  u_I' = -k_P grad.
VectorField closed_loop_field_first_order(double k_P, double k_I, BiasModel bias, Angle target);

/// V = k_I k_P phi + 1/2 (-k_P grad + u_B + k_I u_I)^2, i.e. the potential
/// term plus half the squared velocity.
double lyapunov_first_order(double theta, double u_I, double k_P, double k_I,
                            const BiasModel& bias, Angle target);

/// Closed interval of (unwrapped) angles, lo < hi, hi - lo <= 2 pi.
struct AngleInterval {
  double lo = 0.0;
  double hi = 0.0;

  double width() const noexcept { return hi - lo; }
  bool contains(double theta, double tol = 0.0) const noexcept {
    return theta >= lo - tol && theta <= hi + tol;
  }
};

struct LevelSetReport {
  /// k_P hess(phi) - grad(u_B) > 0 at every interior sample of R.
  bool hessian_ok = false;
  double worst_hessian_margin = 0.0;
  double worst_hessian_theta = 0.0;
  /// phi < phi on the boundary at every interior sample of R.
  bool interior_ok = false;
  /// phi takes the same value on both ends of R (within 1e-12).
  bool boundary_level_constant = false;
  double phi_boundary = 0.0;
  /// k_I k_P phi_boundary - max over S of (k_I k_P phi + 1/2 (-k_P grad + u_B)^2).
  bool level_ok = false;
  double level_margin = 0.0;
  double worst_level_theta = 0.0;
  bool passed = false;
};

/// Samples the premises of the first-order region-of-attraction result on a
/// uniform grid of n_samples points per interval. The Hessian and interior
/// conditions use the interior points of R; the level condition uses every
/// point of S including its endpoints. When phi differs between the two ends
/// of R the smaller value is used.
LevelSetReport check_level_set_premises(double k_P, double k_I, const BiasModel& bias, Angle target,
                                 AngleInterval region, AngleInterval start_set,
                                 std::size_t n_samples);

}  // namespace gpid
