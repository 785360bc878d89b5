#include "gpid/pid.hpp"

#include "gpid/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace gpid {

namespace {

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

// Representative of `theta` (mod 2 pi) closest to `center`.
double unwrap_near(double theta, double center) {
  return center + wrap_angle(theta - center);
}

}  // namespace

Gains make_gains(double k_P, double k_I, double k_D, double beta) {
  Gains g{k_P, k_I, k_D, 0.0, beta};
  if (!positive_finite(k_P)) {
    throw InvalidArgument("gains: k_P must be positive");
  }
  g.alpha = 1.0 / k_P;
  validate(g);
  return g;
}

void validate(const Gains& g) {
  if (!positive_finite(g.k_P)) throw InvalidArgument("gains: k_P must be positive");
  if (!positive_finite(g.k_I)) throw InvalidArgument("gains: k_I must be positive");
  if (!positive_finite(g.k_D)) throw InvalidArgument("gains: k_D must be positive");
  if (!positive_finite(g.beta)) throw InvalidArgument("gains: beta must be positive");
  if (g.alpha != 1.0 / g.k_P) throw InvalidArgument("gains: alpha must equal 1/k_P");
}

double BiasModel::gradient(double theta) const {
  if (slope) {
    return slope(theta);
  }
  if (!value) {
    return 0.0;
  }
  constexpr double h = 1e-6;
  return (value(theta + h) - value(theta - h)) / (2.0 * h);
}

BiasModel BiasModel::none() { return BiasModel{}; }

BiasModel BiasModel::constant(double u) {
  BiasModel b;
  b.value = [u](double) { return u; };
  b.slope = [](double) { return 0.0; };
  return b;
}

PidCommand pid_control(const SecondOrderState& s, const Gains& gains, double grad) {
  const double pd = -gains.k_P * grad - gains.k_D * s.xi;
  return {pd + gains.k_I * s.u_I, pd};
}

VectorField closed_loop_field_second_order(const Gains& gains, double b, BiasModel bias,
                                           Angle target) {
  return [gains, b, bias = std::move(bias), target](double, const StateVector& x) {
    const double theta = x[0];
    const double xi = x[1];
    const double u_I = x[2];
    const double grad = grad_phi(theta, target.value());
    const double pd = -gains.k_P * grad - gains.k_D * xi;
    StateVector dx(3);
    dx[0] = xi;
    dx[1] = b * xi + pd + gains.k_I * u_I + bias(theta);
    dx[2] = pd;
    return dx;
  };
}

double lyapunov_second_order(const SecondOrderState& s, const Gains& gains,
                             const BiasModel& bias, Angle target) {
  const double theta = s.theta.value();
  const double z = gains.k_I * (s.u_I - s.xi) + bias(theta);
  return potential_phi(theta, target.value()) + 0.5 * gains.alpha * s.xi * s.xi +
         0.5 * gains.beta * z * z;
}

Eigen::Matrix2d quadratic_form_matrix(const Gains& gains, double b, double grad_uB) {
  const double a1 = gains.beta * gains.k_I;
  const double a2 = (gains.k_D - (b + gains.k_I)) / gains.k_P;
  const double off = (0.5 / gains.k_P - 0.5 * (b + gains.k_I) * gains.beta * gains.k_I) +
                     0.5 * gains.beta * grad_uB;
  Eigen::Matrix2d m;
  m << -a1, off, off, -a2;
  return m;
}

double lyapunov_rate_second_order(const SecondOrderState& s, const Gains& gains, double b,
                                  const BiasModel& bias, Angle target) {
  (void)target;  // the potential term cancels against the P action
  const double theta = s.theta.value();
  Eigen::Vector2d z(gains.k_I * (s.u_I - s.xi) + bias(theta), s.xi);
  return z.dot(quadratic_form_matrix(gains, b, bias.gradient(theta)) * z);
}

Cond2Report check_cond2(double k_I, double k_D, double b, double k_P, double beta, double d_r,
                        double d_c) {
  if (!positive_finite(k_I) || !positive_finite(k_D) || !positive_finite(k_P) ||
      !positive_finite(beta)) {
    throw InvalidArgument("check_cond2: gains and beta must be positive");
  }
  if (!(d_r >= 0.0) || !(d_c >= 0.0)) {
    throw InvalidArgument("check_cond2: slope bounds must be non-negative");
  }
  Cond2Report r;
  r.f = std::abs(1.0 / (2.0 * k_P * beta) - (b + k_I) * k_I / 2.0);
  r.k_I_margin = k_I - (r.f + d_r / 2.0);
  r.k_D_margin = k_D - (b + k_I + k_P * r.f + beta * k_P * d_c / 2.0);
  r.passed = r.k_I_margin > 0.0 && r.k_D_margin > 0.0;
  return r;
}

TunedGains tune_gains_gershgorin(double b, double k_P, double d_r, double d_c, double margin) {
  if (!positive_finite(k_P)) throw InvalidArgument("tune_gains_gershgorin: k_P must be positive");
  if (!(d_r >= 0.0) || !(d_c >= 0.0) || !std::isfinite(d_r) || !std::isfinite(d_c)) {
    throw InvalidArgument("tune_gains_gershgorin: slope bounds must be non-negative");
  }
  if (!std::isfinite(b)) throw InvalidArgument("tune_gains_gershgorin: b must be finite");
  if (!(margin > 1.0) || !std::isfinite(margin)) {
    throw InvalidArgument("tune_gains_gershgorin: margin must exceed 1");
  }
  TunedGains t;
  t.k_I = margin * std::max({d_r / 2.0, -b, kTuneFloor});
  t.beta = 1.0 / (k_P * (b + t.k_I) * t.k_I);
  t.k_D = margin * (b + t.k_I + t.beta * k_P * d_c / 2.0);
  if (!(t.k_D > 0.0)) {
    // b + k_I > 0 keeps the bracket positive; this only trips on overflow.
    throw NumericalError("tune_gains_gershgorin: derived k_D is not positive");
  }
  return t;
}

VectorField closed_loop_field_first_order(double k_P, double k_I, BiasModel bias, Angle target) {
  return [k_P, k_I, bias = std::move(bias), target](double, const StateVector& x) {
    const double theta = x[0];
    const double p = -k_P * grad_phi(theta, target.value());
    StateVector dx(2);
    dx[0] = p + bias(theta) + k_I * x[1];
    dx[1] = p;
    return dx;
  };
}

double lyapunov_first_order(double theta, double u_I, double k_P, double k_I,
                            const BiasModel& bias, Angle target) {
  const double tgt = target.value();
  const double z = -k_P * grad_phi(theta, tgt) + bias(theta) + k_I * u_I;
  return k_I * k_P * potential_phi(theta, tgt) + 0.5 * z * z;
}

LevelSetReport check_level_set_premises(double k_P, double k_I, const BiasModel& bias, Angle target,
                                 AngleInterval region, AngleInterval start_set,
                                 std::size_t n_samples) {
  if (!(region.hi > region.lo) || !(start_set.hi > start_set.lo)) {
    throw InvalidArgument("check_level_set_premises: empty region");
  }
  if (region.width() > kTwoPi || n_samples < 3) {
    throw InvalidArgument("check_level_set_premises: region wider than the circle or too few samples");
  }
  if (!region.contains(start_set.lo) || !region.contains(start_set.hi)) {
    throw InvalidArgument("check_level_set_premises: start set is not contained in the region");
  }
  const double tgt_s = unwrap_near(target.value(), 0.5 * (start_set.lo + start_set.hi));
  if (!start_set.contains(tgt_s, kAngleTolerance)) {
    throw InvalidArgument("check_level_set_premises: target is not in the start set");
  }
  const double tgt = target.value();

  LevelSetReport r;
  const double phi_lo = potential_phi(region.lo, tgt);
  const double phi_hi = potential_phi(region.hi, tgt);
  r.boundary_level_constant = std::abs(phi_lo - phi_hi) <= 1e-12;
  r.phi_boundary = std::min(phi_lo, phi_hi);

  auto grid = [n_samples](const AngleInterval& iv, std::size_t k) {
    return iv.lo + iv.width() * static_cast<double>(k) / static_cast<double>(n_samples - 1);
  };

  r.worst_hessian_margin = std::numeric_limits<double>::infinity();
  r.interior_ok = true;
  for (std::size_t k = 1; k + 1 < n_samples; ++k) {
    const double theta = grid(region, k);
    const double m = k_P * hess_phi(theta, tgt) - bias.gradient(theta);
    if (m < r.worst_hessian_margin) {
      r.worst_hessian_margin = m;
      r.worst_hessian_theta = theta;
    }
    if (!(potential_phi(theta, tgt) < r.phi_boundary)) {
      r.interior_ok = false;
    }
  }
  r.hessian_ok = r.worst_hessian_margin > 0.0;

  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n_samples; ++k) {
    const double theta = grid(start_set, k);
    const double z = -k_P * grad_phi(theta, tgt) + bias(theta);
    const double level = k_I * k_P * potential_phi(theta, tgt) + 0.5 * z * z;
    if (level > worst) {
      worst = level;
      r.worst_level_theta = theta;
    }
  }
  r.level_margin = k_I * k_P * r.phi_boundary - worst;
  r.level_ok = r.level_margin > 0.0;
  r.passed = r.hessian_ok && r.interior_ok && r.level_ok;
  return r;
}

}  // namespace gpid
