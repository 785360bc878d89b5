#include "gpid/verify.hpp"

#include "gpid/error.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

namespace gpid {

MonotoneReport check_monotone_nonincreasing(std::span<const double> series, double tol) {
  if (series.size() < 2) {
    throw InvalidArgument("check_monotone_nonincreasing: need at least two samples");
  }
  if (!(tol >= 0.0)) {
    throw InvalidArgument("check_monotone_nonincreasing: tolerance must be >= 0");
  }
  MonotoneReport r;
  r.worst_violation = series[1] - series[0];
  r.worst_index = 0;
  for (std::size_t k = 1; k + 1 < series.size(); ++k) {
    const double inc = series[k + 1] - series[k];
    if (inc > r.worst_violation) {
      r.worst_violation = inc;
      r.worst_index = k;
    }
  }
  r.passed = r.worst_violation <= tol;
  return r;
}

Eigen::MatrixXd finite_diff_jacobian(const AutonomousField& field, const StateVector& x,
                                     double h) {
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw InvalidArgument("finite_diff_jacobian: step must be positive");
  }
  const Eigen::Index n = x.size();
  Eigen::MatrixXd jac;
  for (Eigen::Index j = 0; j < n; ++j) {
    StateVector xp = x;
    StateVector xm = x;
    xp[j] += h;
    xm[j] -= h;
    const StateVector fp = field(xp);
    const StateVector fm = field(xm);
    if (!fp.allFinite() || !fm.allFinite()) {
      throw NumericalError("finite_diff_jacobian: field evaluation is not finite");
    }
    if (j == 0) {
      jac.resize(fp.size(), n);
    }
    jac.col(j) = (fp - fm) / (2.0 * h);
  }
  return jac;
}

bool is_negative_definite(const Eigen::Matrix2d& m) {
  if (std::abs(m(0, 1) - m(1, 0)) > 1e-12) {
    throw InvalidArgument("is_negative_definite: matrix is not symmetric");
  }
  return m.trace() < 0.0 && m.determinant() > 0.0;
}

Cubic characteristic_polynomial(const Eigen::Matrix3d& m) {
  const double minors = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0) + m(0, 0) * m(2, 2) -
                        m(0, 2) * m(2, 0) + m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1);
  return {-m.trace(), minors, -m.determinant()};
}

namespace {

double eval_cubic(double a2, double a1, double a0, double x) {
  return ((x + a2) * x + a1) * x + a0;
}

// Newton polish of a real root, kept only when it lowers the residual.
double polish(double a2, double a1, double a0, double x) {
  for (int it = 0; it < 3; ++it) {
    const double f = eval_cubic(a2, a1, a0, x);
    const double df = (3.0 * x + 2.0 * a2) * x + a1;
    if (df == 0.0) break;
    const double nx = x - f / df;
    if (!(std::abs(eval_cubic(a2, a1, a0, nx)) < std::abs(f))) break;
    x = nx;
  }
  return x;
}

}  // namespace

std::array<double, 3> cubic_real_parts(double a2, double a1, double a0) {
  if (!std::isfinite(a2) || !std::isfinite(a1) || !std::isfinite(a0)) {
    throw InvalidArgument("cubic_real_parts: coefficients must be finite");
  }
  // Rescale lambda = sigma mu so the monic cubic in mu has O(1) coefficients;
  // the degeneracy threshold then has a scale-free meaning.
  const double sigma = std::max({std::abs(a2), std::sqrt(std::abs(a1)), std::cbrt(std::abs(a0))});
  if (sigma == 0.0) {
    return {0.0, 0.0, 0.0};
  }
  const double b2 = a2 / sigma;
  const double b1 = a1 / (sigma * sigma);
  const double b0 = a0 / (sigma * sigma * sigma);

  const double shift = b2 / 3.0;
  const double p = b1 - b2 * b2 / 3.0;
  const double q = 2.0 * b2 * b2 * b2 / 27.0 - b2 * b1 / 3.0 + b0;
  const double disc = 0.25 * q * q + p * p * p / 27.0;

  std::array<double, 3> out{};
  if (disc > 1e-14) {
    // One real root and a complex pair.
    const double s = std::sqrt(disc);
    const double u = std::cbrt(-0.5 * q - std::copysign(s, q));
    const double v = (u != 0.0) ? -p / (3.0 * u) : 0.0;
    const double real_root = polish(a2, a1, a0, (u + v - shift) * sigma);
    // The roots sum to -a2.
    const double pair_re = 0.5 * (-a2 - real_root);
    out = {real_root, pair_re, pair_re};
  } else if (p > -1e-14) {
    // p and q both vanish: triple root.
    const double r = (std::cbrt(-q) - shift) * sigma;
    out = {r, r, r};
  } else {
    const double m = 2.0 * std::sqrt(-p / 3.0);
    const double arg = std::clamp(3.0 * q / (p * m), -1.0, 1.0);
    const double base = std::acos(arg) / 3.0;
    for (int k = 0; k < 3; ++k) {
      const double t = m * std::cos(base - 2.0 * std::numbers::pi * k / 3.0);
      out[static_cast<std::size_t>(k)] = polish(a2, a1, a0, (t - shift) * sigma);
    }
  }
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

bool routh_hurwitz_cubic(const Cubic& c) {
  return c.a2 > 0.0 && c.a0 > 0.0 && c.a2 * c.a1 > c.a0;
}

}  // namespace gpid
