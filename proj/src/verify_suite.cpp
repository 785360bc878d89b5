#include "gpid/verify_suite.hpp"

#include "gpid/circle.hpp"
#include "gpid/pendulum.hpp"
#include "gpid/pid.hpp"
#include "gpid/sweep.hpp"
#include "gpid/vehicle.hpp"
#include "gpid/vehicle_integral.hpp"
#include "gpid/verify.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace gpid {

namespace {

class Suite {
 public:
  explicit Suite(double scale) : scale_(scale) {}

  double tol(double t) const { return t * scale_; }

  void add(std::string name, bool passed, double measured, double threshold,
           std::string detail = {}) {
    results_.push_back({std::move(name), passed, measured, threshold, std::move(detail)});
  }

  std::vector<InvariantResult> take() { return std::move(results_); }

 private:
  double scale_;
  std::vector<InvariantResult> results_;
};

double rk4_endpoint_error(double h) {
  const VectorField decay = [](double, const StateVector& x) { return StateVector(-x); };
  const Trajectory tr = integrate(decay, StateVector::Constant(1, 1.0), 0.0, 1.0, h);
  return std::abs(tr.final_state()[0] - std::exp(-1.0));
}

double std_dev_tail(const std::vector<double>& s, double fraction) {
  const auto n = static_cast<std::size_t>(static_cast<double>(s.size()) * fraction);
  const auto first = s.end() - static_cast<std::ptrdiff_t>(std::max<std::size_t>(n, 2));
  double mean = 0.0;
  for (auto it = first; it != s.end(); ++it) mean += *it;
  mean /= static_cast<double>(s.end() - first);
  double var = 0.0;
  for (auto it = first; it != s.end(); ++it) var += (*it - mean) * (*it - mean);
  return std::sqrt(var / static_cast<double>(s.end() - first));
}

void check_integrator(Suite& s) {
  const double e1 = rk4_endpoint_error(1e-2);
  const double e2 = rk4_endpoint_error(5e-3);
  const double e3 = rk4_endpoint_error(2.5e-3);
  const double dev = std::max(std::abs(e1 / e2 - 16.0), std::abs(e2 / e3 - 16.0));
  std::ostringstream d;
  d << "ratios " << e1 / e2 << ", " << e2 / e3;
  s.add("ode.rk4_fourth_order", dev <= s.tol(2.0), dev, s.tol(2.0), d.str());

  const double err = rk4_endpoint_error(1e-3);
  s.add("ode.rk4_exponential_decay", err < s.tol(1e-9), err, s.tol(1e-9));

  IntegralConfig cfg;
  cfg.t_end = 5.0;
  const Trajectory a = simulate_integral(cfg).trajectory;
  const Trajectory b = simulate_integral(cfg).trajectory;
  double diff = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    diff = std::max(diff, (a.states[k] - b.states[k]).cwiseAbs().maxCoeff());
  }
  s.add("ode.deterministic", diff <= s.tol(0.0), diff, s.tol(0.0));
}

void check_circle(Suite& s, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  double grad_err = 0.0;
  double inv_err = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double th = angle(rng);
    const double tg = angle(rng);
    const double h = 1e-6;
    const double fd = (potential_phi(th + h, tg) - potential_phi(th - h, tg)) / (2.0 * h);
    grad_err = std::max(grad_err, std::abs(grad_phi(th, tg) - fd));
    const double r = angle(rng);
    inv_err = std::max(inv_err, std::abs(potential_phi(Angle(th + r), Angle(tg + r)) -
                                         potential_phi(th, tg)));
  }
  s.add("circle.grad_phi_matches_finite_difference", grad_err < s.tol(1e-8), grad_err,
        s.tol(1e-8));
  s.add("circle.potential_left_invariant", inv_err < s.tol(1e-12), inv_err, s.tol(1e-12));
}

void check_gains(Suite& s, std::mt19937_64& rng) {
  const Gains baseline = make_gains(1000.0, 1.0, 600.0, 1.0 / 101000.0);
  const double b = 100.0;
  const Cond2Report c2 = check_cond2(baseline.k_I, baseline.k_D, b, baseline.k_P, baseline.beta, 1.0, 1.0);
  s.add("gpid.baseline_gershgorin_conditions", c2.passed && c2.f == 0.0,
        std::min(c2.k_I_margin, c2.k_D_margin), 0.0, "f=" + std::to_string(c2.f));

  double worst_eig = -std::numeric_limits<double>::infinity();
  bool all_nd = true;
  for (int i = 0; i <= 100; ++i) {
    const double g = -1.0 + 2.0 * i / 100.0;
    const Eigen::Matrix2d m = quadratic_form_matrix(baseline, b, g);
    all_nd = all_nd && is_negative_definite(m);
    worst_eig = std::max(worst_eig, Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(m)
                                        .eigenvalues()
                                        .maxCoeff());
  }
  s.add("gpid.quadratic_form_negative_definite", all_nd && worst_eig < 0.0, worst_eig, 0.0);

  // dV/dt along the flow against the quadratic form, moderate gains.
  const double bb = -0.5;
  const TunedGains tg = tune_gains_gershgorin(bb, 4.0, 1.0, 1.0, 2.0);
  const Gains g = make_gains(4.0, tg.k_I, tg.k_D, tg.beta);
  const BiasModel bias = pendulum_bias_model(1.0);
  const Angle target(0.7);
  const VectorField f = closed_loop_field_second_order(g, bb, bias, target);
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  double rel = 0.0;
  for (int i = 0; i < 100; ++i) {
    StateVector x(3);
    x << angle(rng), unit(rng), 2.0 * unit(rng);
    const StateVector dx = f(0.0, x);
    const double eps = 1e-5 / std::max(1.0, dx.norm());
    auto V = [&](const StateVector& y) {
      return lyapunov_second_order({Angle(y[0]), y[1], y[2]}, g, bias, target);
    };
    const double fd = (V(x + eps * dx) - V(x - eps * dx)) / (2.0 * eps);
    const double an = lyapunov_rate_second_order({Angle(x[0]), x[1], x[2]}, g, bb, bias, target);
    rel = std::max(rel, std::abs(fd - an) / std::max(std::abs(an), 1e-3));
  }
  s.add("gpid.lyapunov_rate_is_quadratic_form", rel < s.tol(1e-6), rel, s.tol(1e-6));

  int failures = 0;
  int cases = 0;
  for (double bv : {-5.0, -1.0, 0.0, 1.0, 10.0, 100.0}) {
    for (double kp : {0.5, 1.0, 10.0, 1000.0}) {
      for (double d : {0.0, 0.5, 1.0, 3.0}) {
        ++cases;
        const TunedGains t = tune_gains_gershgorin(bv, kp, d, d, 1.5);
        bool ok = check_cond2(t.k_I, t.k_D, bv, kp, t.beta, d, d).passed;
        const Gains gg = make_gains(kp, t.k_I, t.k_D, t.beta);
        for (int i = 0; i <= 100 && ok; ++i) {
          ok = is_negative_definite(quadratic_form_matrix(gg, bv, -d + 2.0 * d * i / 100.0));
        }
        failures += ok ? 0 : 1;
      }
    }
  }
  s.add("gpid.tuned_gains_certified", failures == 0, failures, 0.0,
        std::to_string(cases) + " tuning cases");
}

void check_pendulum(Suite& s) {
  PendulumConfig cfg;
  const PendulumRun run = simulate_pendulum(cfg);
  const Trajectory& tr = run.trajectory;
  const StateVector& x = tr.final_state();
  const double state_err = std::max(std::abs(wrap_angle(x[0] - kPi / 2.0)), std::abs(x[1]));
  s.add("pendulum.baseline_reaches_target", state_err < s.tol(1e-4), state_err, s.tol(1e-4));
  const double bias_err = std::abs(cfg.gains.k_I * x[2] - 1.0);
  s.add("pendulum.baseline_integral_cancels_gravity", bias_err < s.tol(1e-3), bias_err,
        s.tol(1e-3));
  const MonotoneReport mono = check_monotone_nonincreasing(tr.monitor("V"), s.tol(1e-9 * cfg.h));
  s.add("pendulum.baseline_lyapunov_nonincreasing", mono.passed, mono.worst_violation,
        s.tol(1e-9 * cfg.h));

  // Gains tuned for the bound w <= 1.2, plant gravity varied below it.
  const TunedGains t = tune_gains_gershgorin(cfg.b, cfg.gains.k_P, 1.2, 1.2, 2.0);
  double worst = 0.0;
  for (double w : {0.8, 1.0, 1.2}) {
    PendulumConfig c = cfg;
    c.w = w;
    c.gains = make_gains(cfg.gains.k_P, t.k_I, t.k_D, t.beta);
    const StateVector xf = simulate_pendulum(c).trajectory.final_state();
    worst = std::max(worst, std::abs(wrap_angle(xf[0] - kPi / 2.0)));
  }
  s.add("pendulum.robust_to_gravity_uncertainty", worst < s.tol(1e-4), worst, s.tol(1e-4));
}

void check_vehicle(Suite& s, std::mt19937_64& rng) {
  double worst_c = 0.0;
  double worst_r = 0.0;
  for (double eps : {-0.5, 0.3}) {
    NominalConfig cfg;
    cfg.v = BodyVelocity(Vec2(1.0 + eps, 0.0));
    const Trajectory tr = simulate_nominal(cfg).trajectory;
    const StateVector& x = tr.final_state();
    worst_c = std::max(worst_c, tr.final_monitor("c_dist"));
    worst_r = std::max(worst_r, std::abs((Vec2(x[1], x[2]) - cfg.ref.center).norm() -
                                         cfg.v.norm() / cfg.ref.omega0));
  }
  s.add("vehicle.magnitude_bias_center_converges", worst_c < s.tol(1e-4), worst_c, s.tol(1e-4));
  s.add("vehicle.magnitude_bias_radius", worst_r < s.tol(1e-3), worst_r, s.tol(1e-3));

  NominalConfig cfg;
  const NominalRun run = simulate_nominal(cfg);
  const Trajectory& tr = run.trajectory;
  const double wp = tr.final_monitor("omega_P");
  const double err = std::max(std::abs(wp - 0.0916), std::abs(wp - run.prediction.plus));
  s.add("vehicle.misalignment_residual_rate", err < s.tol(1e-3), err, s.tol(1e-3),
        "omega_P=" + std::to_string(wp));
  const double chat = tr.final_monitor("chat_dist");
  const double sd = std_dev_tail(tr.monitor("c_dist"), 0.1);
  const double cfin = tr.final_monitor("c_dist");
  s.add("vehicle.misalignment_limit_cycle",
        chat < s.tol(1e-3) && sd < s.tol(1e-3) && cfin > s.tol(1e-3), std::max(chat, sd),
        s.tol(1e-3), "c_dist=" + std::to_string(cfin));

  std::uniform_real_distribution<double> angle(-kPi, kPi);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> rate(0.2, 3.0);
  double form_err = 0.0;
  for (int i = 0; i < 1000; ++i) {
    Reference ref{rate(rng), Vec2(unit(rng), unit(rng)), Angle(angle(rng))};
    const BodyVelocity v(Vec2(1.0 + 0.5 * unit(rng), 0.5 * unit(rng)));
    const Pose pose{Angle(angle(rng)), Vec2(3.0 * unit(rng), 3.0 * unit(rng))};
    const double t = 10.0 * std::abs(unit(rng));
    const double k_P = rate(rng);
    const double a = omega_P(pose, reference_pose(t, ref), k_P, ref.omega0);
    const double b = omega_P_from_center(pose, circle_center(pose, v, ref.omega0), ref.center, v,
                                         k_P, ref.omega0);
    form_err = std::max(form_err, std::abs(a - b));
  }
  s.add("vehicle.omega_P_center_form", form_err < s.tol(1e-10), form_err, s.tol(1e-10));
}

void check_vehicle_integral(Suite& s) {
  IntegralConfig cfg;
  const IntegralRun run = simulate_integral(cfg);
  const Trajectory& tr = run.trajectory;
  const double we = std::abs(tr.final_monitor("omega_cmd") - cfg.ref.omega0);
  const double ce = tr.final_monitor("c_dist");
  const double ie = std::abs(tr.final_state()[3] - 1.0);
  s.add("vehicle_integral.adaptive_rate_and_center", std::max(we, ce) < s.tol(1e-4),
        std::max(we, ce), s.tol(1e-4));
  s.add("vehicle_integral.adaptive_integrator_value", ie < s.tol(1e-3), ie, s.tol(1e-3));

  const IntegralParams p{1.0, 1.0, 0.1, BodyVelocity(Vec2(1.0, 0.1))};
  const Cubic fd = characteristic_polynomial(linearization_jacobian(p));
  const Cubic an = char_poly_coeffs(1.0, 1.0, 0.1, p.v.norm(), p.v.misalignment());
  const double lin_err = std::max({std::abs(fd.a2 - an.a2), std::abs(fd.a1 - an.a1),
                                   std::abs(fd.a0 - an.a0), std::abs(an.a2 - 1.1),
                                   std::abs(an.a1 - 1.1), std::abs(an.a0 - 0.1)});
  s.add("vehicle_integral.linearization_fidelity", lin_err < s.tol(1e-6), lin_err, s.tol(1e-6));

  SweepGrid grid;
  grid.set_axis("omega_0", linspace(0.5, 2.0, 4));
  grid.set_axis("k_P", linspace(0.1, 2.0, 6));
  grid.set_axis("k_I", linspace(0.05, 1.0, 5));
  grid.set_axis("v_norm", {0.5, 1.0, 1.5});
  grid.set_axis("phi", linspace(-1.4, 1.4, 15));
  const auto suff = run_sweep(grid, Classifier::RouthSufficient, 1);
  const auto exact = run_sweep(grid, Classifier::RouthExact, 1);
  const auto eig = run_sweep(grid, Classifier::Eigen, 1);
  int certified = 0;
  int unsound = 0;
  int witnesses = 0;
  int disagreements = 0;
  for (std::size_t i = 0; i < suff.size(); ++i) {
    if (suff[i].verdict) {
      ++certified;
      unsound += eig[i].verdict ? 0 : 1;
    }
    if (exact[i].verdict && !suff[i].verdict) ++witnesses;
    if (std::abs(exact[i].margin) > 1e-8 && exact[i].verdict != eig[i].verdict) ++disagreements;
  }
  s.add("vehicle_integral.certificate_sound", unsound == 0 && certified >= 1000, unsound, 0.0,
        std::to_string(certified) + " certified tuples");
  s.add("vehicle_integral.certificate_conservative", witnesses >= 1, witnesses, 1.0);
  s.add("vehicle_integral.exact_matches_eigen", disagreements == 0, disagreements, 0.0,
        std::to_string(suff.size()) + " tuples");
}

void check_verify(Suite& s, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> coef(-3.0, 3.0);
  int mismatches = 0;
  int compared = 0;
  for (int i = 0; i < 10000; ++i) {
    const Cubic c{coef(rng), coef(rng), coef(rng)};
    if (std::min({std::abs(c.a2), std::abs(c.a0), std::abs(c.a2 * c.a1 - c.a0)}) < 1e-8) {
      continue;
    }
    ++compared;
    const bool stable = cubic_real_parts(c)[0] < -1e-10;
    mismatches += stable == routh_hurwitz_cubic(c) ? 0 : 1;
  }
  s.add("verify.routh_matches_cubic_roots", mismatches == 0, mismatches, 0.0,
        std::to_string(compared) + " triples");

  std::uniform_real_distribution<double> entry(-2.0, 2.0);
  double err = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::Matrix3d a;
    for (int i = 0; i < 9; ++i) a.data()[i] = entry(rng);
    const StateVector x = StateVector::NullaryExpr(3, [&] { return entry(rng); });
    const Eigen::MatrixXd j =
        finite_diff_jacobian([&a](const StateVector& y) { return StateVector(a * y); }, x, 1e-3);
    err = std::max(err, (j - a).cwiseAbs().maxCoeff());
  }
  s.add("verify.jacobian_exact_on_linear_fields", err < s.tol(1e-10), err, s.tol(1e-10));
}

}  // namespace

std::vector<InvariantResult> run_verify_suite(double tolerance_scale) {
  Suite s(tolerance_scale);
  std::mt19937_64 rng(20240607);
  check_integrator(s);
  check_circle(s, rng);
  check_gains(s, rng);
  check_pendulum(s);
  check_vehicle(s, rng);
  check_vehicle_integral(s);
  check_verify(s, rng);
  return s.take();
}

}  // namespace gpid
