#include "gpid/error.hpp"
#include "gpid/vehicle.hpp"
#include "gpid/verify.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

using namespace gpid;

namespace {

const BodyVelocity kE1(Vec2(1.0, 0.0));

double tail_std_dev(const std::vector<double>& s, double fraction) {
  const auto n = static_cast<std::size_t>(static_cast<double>(s.size()) * fraction);
  const auto first = s.end() - static_cast<std::ptrdiff_t>(n);
  const double mean = std::accumulate(first, s.end(), 0.0) / static_cast<double>(n);
  double var = 0.0;
  for (auto it = first; it != s.end(); ++it) var += (*it - mean) * (*it - mean);
  return std::sqrt(var / static_cast<double>(n));
}

// Vehicle holding a constant steering rate.
Trajectory constant_rate_run(double omega, const BodyVelocity& v, double t_end, double h) {
  const VectorField f = [omega, v](double, const StateVector& x) {
    const PoseRate r = vehicle_field(pose_from_state(x), omega, v);
    StateVector d(3);
    d << r.heading, r.p.x(), r.p.y();
    return d;
  };
  return integrate(f, StateVector::Zero(3), 0.0, t_end, h);
}

}  // namespace

TEST(BodyVelocity, Construction) {
  EXPECT_THROW(BodyVelocity(Vec2::Zero()), InvalidArgument);
  EXPECT_THROW(BodyVelocity(Vec2(std::nan(""), 1.0)), InvalidArgument);
  const BodyVelocity v(Vec2(1.0, 0.1));
  EXPECT_NEAR(v.norm(), std::hypot(1.0, 0.1), 1e-15);
  EXPECT_NEAR(v.misalignment(), std::atan2(0.1, 1.0), 1e-15);
  const BodyVelocity p = BodyVelocity::from_polar(2.0, 0.3);
  EXPECT_NEAR(p.vector().x(), 2.0 * std::cos(0.3), 1e-15);
  EXPECT_NEAR(p.misalignment(), 0.3, 1e-15);
}

TEST(VehicleField, Examples) {
  const PoseRate a = vehicle_field({Angle(0.0), Vec2(3.0, 4.0)}, 0.0, kE1);
  EXPECT_EQ(a.heading, 0.0);
  EXPECT_NEAR(a.p.x(), 1.0, 1e-15);
  EXPECT_NEAR(a.p.y(), 0.0, 1e-15);
  const PoseRate b = vehicle_field({Angle(kPi / 2), Vec2::Zero()}, 0.7, kE1);
  EXPECT_EQ(b.heading, 0.7);
  EXPECT_NEAR(b.p.x(), 0.0, 1e-15);
  EXPECT_NEAR(b.p.y(), 1.0, 1e-15);
}

TEST(VehicleField, ConstantRateTracesClosedCircle) {
  for (double w0 : {0.5, 1.0, 2.0}) {
    const Trajectory tr = constant_rate_run(w0, kE1, 2.0 * kPi / w0, 2.0 * kPi / w0 / 20000.0);
    const Vec2 c = circle_center(pose_from_state(tr.states.front()), kE1, w0);
    for (const auto& s : tr.states) {
      ASSERT_NEAR((Vec2(s[1], s[2]) - c).norm(), 1.0 / w0, 1e-9);
    }
    EXPECT_LT(tr.final_state().tail<2>().norm(), 1e-6);
  }
}

TEST(ReferencePose, Examples) {
  const Reference ref{1.0, Vec2::Zero(), Angle(0.0)};
  const Pose p0 = reference_pose(0.0, ref);
  EXPECT_NEAR(p0.p.x(), 0.0, 1e-15);
  EXPECT_NEAR(p0.p.y(), -1.0, 1e-15);

  const Reference r2{0.8, Vec2(2.0, -1.0), Angle(0.4)};
  for (double t : {0.0, 1.3, 17.0, 250.0}) {
    const Pose p = reference_pose(t, r2);
    EXPECT_LT((circle_center(p, kE1, r2.omega0) - r2.center).norm(), 1e-12);
  }
  const double period = 2.0 * kPi / r2.omega0;
  EXPECT_TRUE(angles_equal(reference_pose(period, r2).heading, reference_pose(0.0, r2).heading,
                           1e-12));
  EXPECT_NEAR((r2.phase0.value() + r2.omega0 * period) - r2.phase0.value(), 2.0 * kPi, 1e-12);
}

TEST(OmegaP, Examples) {
  const Reference ref{1.5, Vec2(1.0, 2.0), Angle(0.3)};
  const Pose rp = reference_pose(2.0, ref);
  EXPECT_NEAR(omega_P(rp, rp, 2.0, ref.omega0), 0.0, 1e-14);

  // Center on the reference center with v = e1, arbitrary headings.
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  for (int i = 0; i < 100; ++i) {
    const Angle th(ang(rng));
    const Vec2 dir(std::cos(th.value()), std::sin(th.value()));
    const Pose pose{th, ref.center - quarter_turn(dir) / ref.omega0};
    EXPECT_NEAR(omega_P(pose, reference_pose(ang(rng), ref), 0.9, ref.omega0), 0.0, 1e-13);
  }

  // Displacement delta / omega0 along the heading, aligned headings.
  const double delta = 0.37, k_P = 1.7;
  const Vec2 dir(std::cos(rp.heading.value()), std::sin(rp.heading.value()));
  const Pose shifted{rp.heading, rp.p + dir * delta / ref.omega0};
  EXPECT_NEAR(omega_P(shifted, rp, k_P, ref.omega0), k_P * delta, 1e-13);
}

TEST(OmegaP, CenterFormAgreesForGeneralVelocity) {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> pos(0.2, 3.0);
  for (int i = 0; i < 1000; ++i) {
    const Reference ref{pos(rng), Vec2(u(rng), u(rng)), Angle(ang(rng))};
    const BodyVelocity v(Vec2(1.0 + 0.5 * u(rng), 0.5 * u(rng)));
    const Pose pose{Angle(ang(rng)), Vec2(3 * u(rng), 3 * u(rng))};
    const double t = 5.0 * (u(rng) + 1.0);
    const double k_P = pos(rng);
    const double a = omega_P(pose, reference_pose(t, ref), k_P, ref.omega0);
    const double b = omega_P_from_center(pose, circle_center(pose, v, ref.omega0), ref.center, v,
                                         k_P, ref.omega0);
    ASSERT_LT(std::abs(a - b), 1e-10);
  }
}

TEST(CircleCenter, Examples) {
  const Vec2 c = circle_center({Angle(0.0), Vec2::Zero()}, kE1, 1.0);
  EXPECT_NEAR(c.x(), 0.0, 1e-15);
  EXPECT_NEAR(c.y(), 1.0, 1e-15);
  EXPECT_THROW(circle_center({Angle(0.0), Vec2::Zero()}, kE1, 0.0), InvalidArgument);
}

TEST(CircleCenter, InvariantUnderConstantRate) {
  const BodyVelocity v(Vec2(1.0, 0.1));
  const double w0 = 1.2;
  const Trajectory tr = constant_rate_run(w0, v, 20.0, 1e-3);
  const Vec2 c0 = circle_center(pose_from_state(tr.states.front()), v, w0);
  for (const auto& s : tr.states) {
    ASSERT_LT((circle_center(pose_from_state(s), v, w0) - c0).norm(), 1e-9);
  }
}

TEST(LyapunovCenter, Examples) {
  EXPECT_EQ(lyapunov_center(Vec2(1, 2), Vec2(1, 2)), 0.0);
  EXPECT_DOUBLE_EQ(std::sqrt(2.0 * lyapunov_center(Vec2(2, 0), Vec2(0, 0))), 2.0);
}

TEST(ResidualOmega, Examples) {
  EXPECT_EQ(predicted_residual_omega(1.0, 1.0, 1.0, 0.0).plus, 0.0);
  const BodyVelocity v(Vec2(1.0, 0.1));
  const ResidualOmega r = predicted_residual_omega(1.0, 1.0, v.norm(), v.misalignment());
  EXPECT_NEAR(r.plus, 0.0916, 1e-4);
  EXPECT_NEAR(r.plus, oracle::residual_rate_plus(1.0, 0.1), 1e-15);
  for (double w : {r.plus, r.minus}) {
    EXPECT_NEAR(w * (1.0 + w) - 1.0 * 1.0 * v.norm() * std::sin(v.misalignment()), 0.0, 1e-12);
  }
}

TEST(ResidualOmega, ResidualVanishesOverRandomInputs) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> pos(0.1, 3.0);
  std::uniform_real_distribution<double> phi(-0.2, 1.5);
  for (int i = 0; i < 1000; ++i) {
    const double w0 = pos(rng), k_P = pos(rng), vn = pos(rng), ph = phi(rng);
    const double c = w0 * k_P * vn * std::sin(ph);
    if (w0 * w0 / 4.0 + c < 0.0) {
      EXPECT_THROW(predicted_residual_omega(w0, k_P, vn, ph), NumericalError);
      continue;
    }
    const ResidualOmega r = predicted_residual_omega(w0, k_P, vn, ph);
    ASSERT_NEAR(r.plus * (w0 + r.plus) - c, 0.0, 1e-12 * std::max(1.0, std::abs(c)));
    ASSERT_NEAR(r.plus, oracle::residual_rate_plus(w0, c), 1e-12);
  }
}

TEST(Nominal, MagnitudeBiasConverges) {
  for (double eps : {-0.5, 0.3}) {
    NominalConfig cfg;
    cfg.v = BodyVelocity(Vec2(1.0 + eps, 0.0));
    const NominalRun run = simulate_nominal(cfg);
    const Trajectory& tr = run.trajectory;
    EXPECT_LT(tr.final_monitor("c_dist"), 1e-4) << "eps " << eps;
    const StateVector& x = tr.final_state();
    EXPECT_NEAR(Vec2(x[1], x[2]).norm(), (1.0 + eps) / cfg.ref.omega0, 1e-3);
    EXPECT_NEAR(tr.final_monitor("omega_P"), 0.0, 1e-4);
    EXPECT_TRUE(check_monotone_nonincreasing(tr.monitor("V_center"), 1e-12).passed);
  }
}

TEST(Nominal, ExactTrackingIsInvariant) {
  NominalConfig cfg;
  cfg.v = kE1;
  cfg.ref = Reference{1.3, Vec2(0.5, -0.2), Angle(0.8)};
  cfg.init = reference_pose(0.0, cfg.ref);
  cfg.t_end = 30.0;
  const Trajectory tr = simulate_nominal(cfg).trajectory;
  for (double w : tr.monitor("omega_P")) ASSERT_LT(std::abs(w), 1e-10);
}

TEST(Nominal, MisalignmentLimitCycle) {
  const NominalConfig cfg;
  const NominalRun run = simulate_nominal(cfg);
  const Trajectory& tr = run.trajectory;
  ASSERT_TRUE(run.has_prediction);
  const double w_hat = oracle::residual_rate_plus(1.0, 0.1);
  EXPECT_NEAR(tr.final_monitor("omega_P"), 0.0916, 1e-3);
  EXPECT_NEAR(tr.final_monitor("omega_P"), w_hat, 1e-6);
  EXPECT_LT(tr.final_monitor("chat_dist"), 1e-3);
  EXPECT_LT(tail_std_dev(tr.monitor("c_dist"), 0.1), 1e-3);
  EXPECT_GT(tr.final_monitor("c_dist"), 1e-2);
  // The center computed with omega0 + w_hat stays fixed at the end.
  const auto& chat = tr.monitor("chat_dist");
  EXPECT_LT(tail_std_dev(chat, 0.1), 1e-6);
}

TEST(Nominal, CenterDerivativeLaw) {
  NominalConfig cfg;
  cfg.t_end = 20.0;
  cfg.init = Pose{Angle(1.0), Vec2(0.5, -0.3)};
  const Trajectory tr = simulate_nominal(cfg).trajectory;
  const double w0 = cfg.ref.omega0, h = cfg.h;
  const auto& wp = tr.monitor("omega_P");
  for (std::size_t k = 1; k + 1 < tr.size(); k += 7) {
    const Vec2 cm = circle_center(pose_from_state(tr.states[k - 1]), cfg.v, w0);
    const Vec2 cp = circle_center(pose_from_state(tr.states[k + 1]), cfg.v, w0);
    const Vec2 fd = (cp - cm) / (2 * h);
    const Vec2 an = -(wp[k] / w0) * rotation(tr.states[k][0]) * cfg.v.vector();
    ASSERT_LT((fd - an).norm(), 1e-5 * std::max(an.norm(), 1e-2)) << "t=" << tr.times[k];
  }
}

TEST(Nominal, CenterLyapunovRateWithAlignedVelocity) {
  NominalConfig cfg;
  cfg.v = BodyVelocity(Vec2(1.3, 0.0));
  cfg.k_P = 0.8;
  cfg.t_end = 20.0;
  cfg.init = Pose{Angle(-2.0), Vec2(1.0, 1.0)};
  const Trajectory tr = simulate_nominal(cfg).trajectory;
  const auto& V = tr.monitor("V_center");
  const double w0 = cfg.ref.omega0, h = cfg.h;
  for (std::size_t k = 2; k + 2 < tr.size(); k += 7) {
    const Pose pose = pose_from_state(tr.states[k]);
    const Vec2 d = circle_center(pose, cfg.v, w0) - cfg.ref.center;
    const double along = std::cos(tr.states[k][0]) * d.x() + std::sin(tr.states[k][0]) * d.y();
    const double an = -cfg.k_P * cfg.v.norm() * along * along;
    // Five-point stencil, fourth order in h.
    const double fd = (-V[k + 2] + 8 * V[k + 1] - 8 * V[k - 1] + V[k - 2]) / (12 * h);
    ASSERT_LE(an, 0.0);
    ASSERT_LT(std::abs(fd - an), 1e-5 * std::max(std::abs(an), 1e-3)) << "t=" << tr.times[k];
  }
}

TEST(Nominal, RejectsInvalidConfig) {
  NominalConfig cfg;
  cfg.k_P = 0.0;
  EXPECT_THROW(simulate_nominal(cfg), InvalidArgument);
  cfg = NominalConfig{};
  cfg.ref.omega0 = -1.0;
  EXPECT_THROW(simulate_nominal(cfg), InvalidArgument);
}

TEST(Nominal, NoRealResidualRateWarns) {
  NominalConfig cfg;
  cfg.v = BodyVelocity::from_polar(1.0, -1.2);
  cfg.k_P = 2.0;
  cfg.t_end = 1.0;
  const NominalRun run = simulate_nominal(cfg);
  EXPECT_FALSE(run.has_prediction);
  ASSERT_EQ(run.warnings.size(), 1u);
}
