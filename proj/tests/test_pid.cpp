#include "gpid/error.hpp"
#include "gpid/pendulum.hpp"
#include "gpid/pid.hpp"
#include "gpid/verify.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace gpid;

namespace {

const double kBetaBaseline = 1.0 / 101000.0;
const Gains kBaseline = make_gains(1000.0, 1.0, 600.0, kBetaBaseline);

StateVector state3(double a, double b, double c) {
  StateVector x(3);
  x << a, b, c;
  return x;
}

}  // namespace

TEST(Gains, MakeGainsSetsAlpha) {
  EXPECT_EQ(kBaseline.alpha, 1.0 / 1000.0);
  EXPECT_EQ(kBaseline.beta, kBetaBaseline);
  EXPECT_THROW(make_gains(0.0, 1.0, 1.0, 1.0), InvalidArgument);
  EXPECT_THROW(make_gains(1.0, -1.0, 1.0, 1.0), InvalidArgument);
  EXPECT_THROW(make_gains(1.0, 1.0, 0.0, 1.0), InvalidArgument);
  EXPECT_THROW(make_gains(1.0, 1.0, 1.0, 0.0), InvalidArgument);
  Gains bad = kBaseline;
  bad.alpha = 1.0;
  EXPECT_THROW(validate(bad), InvalidArgument);
}

TEST(BiasModel, EmptyAndConstant) {
  const BiasModel none = BiasModel::none();
  EXPECT_EQ(none(1.3), 0.0);
  EXPECT_EQ(none.gradient(1.3), 0.0);
  const BiasModel c = BiasModel::constant(-2.5);
  EXPECT_EQ(c(0.4), -2.5);
  EXPECT_EQ(c.gradient(0.4), 0.0);
}

TEST(BiasModel, GradientFallsBackToFiniteDifference) {
  BiasModel m;
  m.value = [](double th) { return std::cos(2.0 * th); };
  for (double th : {-2.0, 0.1, 1.7}) EXPECT_NEAR(m.gradient(th), -2.0 * std::sin(2.0 * th), 1e-8);
}

TEST(PidControl, Examples) {
  const PidCommand eq = pid_control({Angle(0.3), 0.0, 0.0}, kBaseline, 0.0);
  EXPECT_EQ(eq.u, 0.0);
  EXPECT_EQ(eq.du_I, 0.0);

  const PidCommand hold = pid_control({Angle(0.3), 0.0, 2.5}, kBaseline, 0.0);
  EXPECT_EQ(hold.u, kBaseline.k_I * 2.5);
  EXPECT_EQ(hold.du_I, 0.0);

  const PidCommand c = pid_control({Angle(0.0), 0.1, 0.0}, kBaseline, 0.5);
  const double expected = -1000.0 * 0.5 - 600.0 * 0.1;
  EXPECT_NEAR(c.u, -560.0, 1e-12);
  EXPECT_NEAR(c.du_I, -560.0, 1e-12);
  EXPECT_EQ(c.u, expected);
}

TEST(SecondOrderField, VanishesAtEquilibrium) {
  const BiasModel bias = pendulum_bias_model(1.0);
  const Angle target(kPi / 2);
  const auto f = closed_loop_field_second_order(kBaseline, 100.0, bias, target);
  const double u_I = -bias(target.value()) / kBaseline.k_I;
  EXPECT_LT(f(0.0, state3(target.value(), 0.0, u_I)).norm(), 1e-12);
}

TEST(SecondOrderField, NoBiasDampingRow) {
  const double b = 3.0;
  const Angle target(0.4);
  const auto f = closed_loop_field_second_order(kBaseline, b, BiasModel::none(), target);
  EXPECT_NEAR(f(0.0, state3(0.4, 1.0, 0.0))[1], b - kBaseline.k_D, 1e-12);
}

TEST(SecondOrderField, PendulumInstantiationMatchesDirectModel) {
  const double w = 1.3;
  const double b = -0.7;
  const Gains g = make_gains(20.0, 2.0, 15.0, 0.01);
  const Angle target(1.1);
  const auto f = closed_loop_field_second_order(g, b, pendulum_bias_model(w), target);
  const oracle::PendulumOracle ref{w, b, g.k_P, g.k_I, g.k_D, target.value()};
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  for (int i = 0; i < 500; ++i) {
    const Eigen::Vector3d x(u(rng), u(rng), u(rng));
    ASSERT_LT((f(0.0, x) - ref(x)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(SecondOrderField, ZeroExactlyOnLaSalleSet) {
  const BiasModel bias = pendulum_bias_model(1.0);
  const Angle target(kPi / 2);
  const auto f = closed_loop_field_second_order(kBaseline, 100.0, bias, target);
  // grad phi vanishes at the target and at its antipode.
  for (double th : {kPi / 2, -kPi / 2}) {
    EXPECT_LT(f(0.0, state3(th, 0.0, -bias(th) / kBaseline.k_I)).norm(), 1e-12);
    EXPECT_GT(f(0.0, state3(th, 0.0, -bias(th) / kBaseline.k_I + 1e-3)).norm(), 1e-4);
    EXPECT_GT(f(0.0, state3(th, 1e-3, -bias(th) / kBaseline.k_I)).norm(), 1e-4);
  }
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 1000; ++i) {
    ASSERT_GT(f(0.0, state3(u(rng), u(rng), u(rng))).norm(), 1e-6);
  }
}

TEST(LyapunovSecondOrder, Examples) {
  const BiasModel bias = pendulum_bias_model(1.0);
  const Angle target(kPi / 2);
  const double at_target_uI = -bias(kPi / 2) / kBaseline.k_I;
  EXPECT_EQ(lyapunov_second_order({target, 0.0, at_target_uI}, kBaseline, bias, target), 0.0);

  const double anti = kPi / 2 + kPi;
  const double anti_uI = -bias(anti) / kBaseline.k_I;
  EXPECT_NEAR(lyapunov_second_order({Angle(anti), 0.0, anti_uI}, kBaseline, bias, target), 1.0,
              1e-15);

  EXPECT_NEAR(lyapunov_second_order({Angle(0.0), 0.0, 0.0}, kBaseline, bias, target), 0.5, 1e-15);
}

TEST(QuadraticForm, BaselineOffDiagonalCancels) {
  const Eigen::Matrix2d m = quadratic_form_matrix(kBaseline, 100.0, 0.0);
  EXPECT_EQ(m(0, 1), 0.0);
  EXPECT_EQ(m(1, 0), 0.0);
  EXPECT_LT(m(0, 0), 0.0);
  EXPECT_LT(m(1, 1), 0.0);
}

TEST(QuadraticForm, BaselineMaxSlope) {
  const Eigen::Matrix2d m = quadratic_form_matrix(kBaseline, 100.0, -1.0);
  EXPECT_NEAR(m(0, 1), -kBetaBaseline / 2.0, 1e-20);
  EXPECT_NEAR(m(0, 1), -4.95e-6, 1e-8);
  const auto [lo, hi] = oracle::sym2_eigenvalues(m(0, 0), m(0, 1), m(1, 1));
  EXPECT_LT(lo, 0.0);
  EXPECT_LT(hi, 0.0);
  EXPECT_TRUE(is_negative_definite(m));
}

TEST(QuadraticForm, NegativeDefiniteOverSlopeRange) {
  for (int i = 0; i <= 100; ++i) {
    const double g = -1.0 + 2.0 * i / 100.0;
    const Eigen::Matrix2d m = quadratic_form_matrix(kBaseline, 100.0, g);
    const auto [lo, hi] = oracle::sym2_eigenvalues(m(0, 0), m(0, 1), m(1, 1));
    ASSERT_LT(hi, 0.0) << "grad_uB = " << g;
    ASSERT_TRUE(is_negative_definite(m));
  }
}

TEST(QuadraticForm, NonPositiveBetaIsNotNegativeDefinite) {
  Gains g = kBaseline;
  g.beta = 0.0;
  EXPECT_FALSE(is_negative_definite(quadratic_form_matrix(g, 100.0, 0.0)));
  g.beta = -1e-3;
  EXPECT_FALSE(is_negative_definite(quadratic_form_matrix(g, 100.0, 0.0)));
}

TEST(LyapunovRate, MatchesDirectionalFiniteDifference) {
  const double b = -0.5;
  const Gains g = make_gains(4.0, 2.0, 6.0, 0.08);
  const BiasModel bias = pendulum_bias_model(1.0);
  const Angle target(0.7);
  const auto f = closed_loop_field_second_order(g, b, bias, target);
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto V = [&](const StateVector& y) {
    return lyapunov_second_order({Angle(y[0]), y[1], y[2]}, g, bias, target);
  };
  for (int i = 0; i < 100; ++i) {
    const StateVector x = state3(ang(rng), u(rng), 2.0 * u(rng));
    const StateVector dx = f(0.0, x);
    const double eps = 1e-5 / std::max(1.0, dx.norm());
    const double fd = (V(x + eps * dx) - V(x - eps * dx)) / (2.0 * eps);
    const double an =
        lyapunov_rate_second_order({Angle(x[0]), x[1], x[2]}, g, b, bias, target);
    // Direct z^T M z with the state's local slope, independent of the helper.
    const Eigen::Vector2d z(g.k_I * (x[2] - x[1]) + bias(x[0]), x[1]);
    const double direct =
        z.dot(quadratic_form_matrix(g, b, -1.0 * std::cos(x[0])) * z);
    ASSERT_NEAR(an, direct, 1e-12 * std::max(1.0, std::abs(direct)));
    ASSERT_LT(std::abs(fd - an) / std::max(std::abs(an), 1e-3), 1e-6) << "state " << i;
  }
}

TEST(Cond2, BaselinePasses) {
  const Cond2Report r = check_cond2(1.0, 600.0, 100.0, 1000.0, kBetaBaseline, 1.0, 1.0);
  EXPECT_TRUE(r.passed);
  EXPECT_EQ(r.f, 0.0);
  EXPECT_GT(r.k_I_margin, 0.0);
  EXPECT_GT(r.k_D_margin, 0.0);
}

TEST(Cond2, StrictBoundaries) {
  // k_P = 1, b = 1.5, k_I = 0.5, beta = 1 gives f = 0 exactly.
  const Cond2Report at_kI = check_cond2(0.5, 10.0, 1.5, 1.0, 1.0, 1.0, 0.0);
  EXPECT_EQ(at_kI.f, 0.0);
  EXPECT_EQ(at_kI.k_I_margin, 0.0);
  EXPECT_FALSE(at_kI.passed);

  const Cond2Report at_kD = check_cond2(0.5, 2.0, 1.5, 1.0, 1.0, 0.0, 0.0);
  EXPECT_EQ(at_kD.f, 0.0);
  EXPECT_EQ(at_kD.k_D_margin, 0.0);
  EXPECT_FALSE(at_kD.passed);

  EXPECT_TRUE(check_cond2(0.5, 2.0 + 1e-9, 1.5, 1.0, 1.0, 0.0, 0.0).passed);
}

TEST(Cond2, RejectsInvalidInputs) {
  EXPECT_THROW(check_cond2(0.0, 1.0, 0.0, 1.0, 1.0, 0.0, 0.0), InvalidArgument);
  EXPECT_THROW(check_cond2(1.0, 1.0, 0.0, 1.0, 1.0, -1.0, 0.0), InvalidArgument);
}

TEST(Cond2, ImpliesNegativeDefinite) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> lg(-2.0, 2.0);
  int certified = 0;
  for (int i = 0; i < 5000; ++i) {
    const double k_P = std::pow(10.0, lg(rng));
    const double k_I = std::pow(10.0, lg(rng));
    const double k_D = std::pow(10.0, lg(rng) + 1.0);
    const double beta = std::pow(10.0, lg(rng) - 1.0);
    const double b = 5.0 * lg(rng);
    const double d = std::abs(lg(rng));
    if (!check_cond2(k_I, k_D, b, k_P, beta, d, d).passed) continue;
    ++certified;
    const Gains g = make_gains(k_P, k_I, k_D, beta);
    for (int s = 0; s <= 20; ++s) {
      const Eigen::Matrix2d m = quadratic_form_matrix(g, b, -d + 2.0 * d * s / 20.0);
      ASSERT_LT(oracle::sym2_eigenvalues(m(0, 0), m(0, 1), m(1, 1)).second, 0.0);
    }
  }
  EXPECT_GT(certified, 50);
}

TEST(Tuning, BaselineExample) {
  const TunedGains t = tune_gains_gershgorin(100.0, 1000.0, 1.0, 1.0, 2.0);
  EXPECT_EQ(t.k_I, 1.0);
  EXPECT_EQ(t.beta, kBetaBaseline);
  const Cond2Report r = check_cond2(t.k_I, t.k_D, 100.0, 1000.0, t.beta, 1.0, 1.0);
  EXPECT_TRUE(r.passed);
  EXPECT_EQ(r.f, 0.0);
}

TEST(Tuning, NoBiasNegativeDamping) {
  const TunedGains t = tune_gains_gershgorin(-2.0, 5.0, 0.0, 0.0, 1.5);
  EXPECT_GT(t.k_I, 0.0);
  EXPECT_TRUE(check_cond2(t.k_I, t.k_D, -2.0, 5.0, t.beta, 0.0, 0.0).passed);
}

TEST(Tuning, GridAlwaysCertified) {
  for (double b : {-10.0, -1.0, -1e-3, 0.0, 0.5, 100.0, 1e4}) {
    for (double k_P : {1e-2, 1.0, 30.0, 1000.0}) {
      for (double d : {0.0, 0.1, 1.0, 5.0}) {
        for (double margin : {1.01, 2.0, 10.0}) {
          const TunedGains t = tune_gains_gershgorin(b, k_P, d, d, margin);
          ASSERT_TRUE(check_cond2(t.k_I, t.k_D, b, k_P, t.beta, d, d).passed)
              << b << " " << k_P << " " << d << " " << margin;
          const Gains g = make_gains(k_P, t.k_I, t.k_D, t.beta);
          for (int s = 0; s <= 100; ++s) {
            ASSERT_TRUE(is_negative_definite(quadratic_form_matrix(g, b, -d + 2.0 * d * s / 100.0)));
          }
        }
      }
    }
  }
}

TEST(Tuning, RejectsInvalidInputs) {
  EXPECT_THROW(tune_gains_gershgorin(0.0, 1.0, 1.0, 1.0, 1.0), InvalidArgument);
  EXPECT_THROW(tune_gains_gershgorin(0.0, 0.0, 1.0, 1.0, 2.0), InvalidArgument);
  EXPECT_THROW(tune_gains_gershgorin(0.0, 1.0, -1.0, 1.0, 2.0), InvalidArgument);
}

TEST(SecondOrderLoop, LyapunovNonincreasingWithCertifiedGains) {
  const double b = 2.0;
  const double w = 0.8;
  const TunedGains t = tune_gains_gershgorin(b, 50.0, w, w, 3.0);
  const Gains g = make_gains(50.0, t.k_I, t.k_D, t.beta);
  const BiasModel bias = pendulum_bias_model(w);
  const Angle target(-2.0);
  const double h = 1e-3;
  const auto tr = integrate(
      closed_loop_field_second_order(g, b, bias, target), state3(1.0, 0.5, 0.0), 0.0, 20.0, h,
      {{"V", [&](double, const StateVector& x) {
         return lyapunov_second_order({Angle(x[0]), x[1], x[2]}, g, bias, target);
       }}});
  const MonotoneReport r = check_monotone_nonincreasing(tr.monitor("V"), 1e-9 * h);
  EXPECT_TRUE(r.passed) << r.worst_violation << " at " << r.worst_index;
  EXPECT_LT(std::abs(wrap_angle(tr.final_state()[0] - target.value())), 1e-3);
}

TEST(FirstOrderField, EquilibriumAndGradientFlow) {
  const BiasModel bias = pendulum_bias_model(1.0);
  const Angle target(0.6);
  const double k_P = 5.0, k_I = 2.0;
  const auto f = closed_loop_field_first_order(k_P, k_I, bias, target);
  StateVector eq(2);
  eq << 0.6, -bias(0.6) / k_I;
  EXPECT_LT(f(0.0, eq).norm(), 1e-14);

  const auto f0 = closed_loop_field_first_order(k_P, k_I, BiasModel::none(), target);
  for (double th : {-2.0, 0.0, 1.0, 3.0}) {
    StateVector x(2);
    x << th, 0.0;
    EXPECT_NEAR(f0(0.0, x)[0], -k_P * grad_phi(th, 0.6), 1e-15);
  }
}

TEST(FirstOrderField, LyapunovDecreasesInsideRegion) {
  const double w = 1.0, k_P = 5.0, k_I = 1.0, h = 1e-3;
  const BiasModel bias = pendulum_bias_model(w);
  const Angle target(0.0);
  StateVector x0(2);
  x0 << 1.0, 0.0;
  const auto tr = integrate(closed_loop_field_first_order(k_P, k_I, bias, target), x0, 0.0, 20.0,
                            h, {{"V", [&](double, const StateVector& x) {
                                   return lyapunov_first_order(x[0], x[1], k_P, k_I, bias, target);
                                 }}});
  for (const auto& s : tr.states) ASSERT_LT(std::abs(s[0]), kPi / 2);
  EXPECT_TRUE(check_monotone_nonincreasing(tr.monitor("V"), 1e-9 * h).passed);
  EXPECT_LT(std::abs(tr.final_state()[0]), 1e-4);
  EXPECT_NEAR(k_I * tr.final_state()[1], -bias(0.0), 1e-4);
}

TEST(LevelSet, NoBiasHalfCircleRegion) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> lg(-2.0, 2.0);
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  for (int i = 0; i < 200; ++i) {
    const double tg = ang(rng);
    const double k_P = std::pow(10.0, lg(rng)), k_I = std::pow(10.0, lg(rng));
    const AngleInterval region{tg - kPi / 2, tg + kPi / 2};
    const AngleInterval start{tg - 1e-7, tg + 1e-7};
    const LevelSetReport r =
        check_level_set_premises(k_P, k_I, BiasModel::none(), Angle(tg), region, start, 201);
    ASSERT_TRUE(r.hessian_ok);
    ASSERT_TRUE(r.interior_ok);
    ASSERT_TRUE(r.boundary_level_constant);
    ASSERT_NEAR(r.phi_boundary, 0.5, 1e-12);
    ASSERT_TRUE(r.level_ok);
    ASSERT_TRUE(r.passed);
  }
}

TEST(LevelSet, StartSetEqualToRegionFailsLevelCondition) {
  const double tg = 0.3;
  const AngleInterval region{tg - kPi / 2, tg + kPi / 2};
  const LevelSetReport r =
      check_level_set_premises(2.0, 1.0, BiasModel::none(), Angle(tg), region, region, 201);
  EXPECT_TRUE(r.hessian_ok);
  EXPECT_FALSE(r.level_ok);
  EXPECT_FALSE(r.passed);
}

TEST(LevelSet, HessianConditionNeedsProportionalGainAboveTwiceGravity) {
  const double w = 1.0;
  const BiasModel bias = pendulum_bias_model(w);
  const AngleInterval region{kPi / 2, 3 * kPi / 2};
  const AngleInterval start{kPi - 0.01, kPi + 0.01};
  const LevelSetReport weak = check_level_set_premises(1.5, 1.0, bias, Angle(kPi), region, start, 201);
  EXPECT_FALSE(weak.hessian_ok);
  EXPECT_LT(weak.worst_hessian_margin, 0.0);
  EXPECT_NEAR(weak.worst_hessian_theta, kPi, 0.02);
  const LevelSetReport strong = check_level_set_premises(3.0, 1.0, bias, Angle(kPi), region, start, 201);
  EXPECT_TRUE(strong.hessian_ok);
  EXPECT_TRUE(strong.passed);
}

TEST(LevelSet, RejectsMalformedSets) {
  const BiasModel none = BiasModel::none();
  EXPECT_THROW(check_level_set_premises(1, 1, none, Angle(0), {1, 0}, {0, 0.5}, 11), InvalidArgument);
  EXPECT_THROW(check_level_set_premises(1, 1, none, Angle(0), {-1, 1}, {-0.5, 0.5}, 2),
               InvalidArgument);
  EXPECT_THROW(check_level_set_premises(1, 1, none, Angle(0), {-1, 1}, {-2, 0.5}, 11),
               InvalidArgument);
  EXPECT_THROW(check_level_set_premises(1, 1, none, Angle(0), {-1, 1}, {0.2, 0.5}, 11),
               InvalidArgument);
  EXPECT_THROW(check_level_set_premises(1, 1, none, Angle(0), {-4, 4}, {-0.5, 0.5}, 11),
               InvalidArgument);
}
