#include "gpid/circle.hpp"
#include "gpid/error.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

using namespace gpid;

TEST(WrapAngle, Examples) {
  EXPECT_EQ(wrap_angle(0.0), 0.0);
  EXPECT_NEAR(wrap_angle(3.0 * kPi), kPi, 1e-15);
  EXPECT_EQ(wrap_angle(-kPi), kPi);
  EXPECT_EQ(wrap_angle(kPi), kPi);
  EXPECT_NEAR(wrap_angle(-3.0 * kPi), kPi, 1e-15);
}

TEST(WrapAngle, RangeAndPeriodicity) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-100.0, 100.0);
  for (int i = 0; i < 10000; ++i) {
    const double x = u(rng);
    const double w = wrap_angle(x);
    ASSERT_GT(w, -kPi);
    ASSERT_LE(w, kPi);
    // x - w is a multiple of 2 pi.
    const double turns = (x - w) / kTwoPi;
    ASSERT_NEAR(turns, std::round(turns), 1e-12);
  }
}

TEST(WrapAngle, RejectsNonFinite) {
  EXPECT_THROW(wrap_angle(std::numeric_limits<double>::infinity()), InvalidArgument);
  EXPECT_THROW(wrap_angle(std::nan("")), InvalidArgument);
}

TEST(Angle, CanonicalRepresentative) {
  EXPECT_EQ(Angle(-kPi).value(), kPi);
  EXPECT_EQ(Angle::identity().value(), 0.0);
  EXPECT_NEAR(Angle(5.0 * kPi / 2.0).value(), kPi / 2.0, 1e-15);
}

TEST(Compose, Examples) {
  EXPECT_NEAR(compose(Angle(kPi / 2), Angle(kPi / 2)).value(), kPi, 1e-15);
  const Angle a(2.3);
  EXPECT_NEAR(compose(a, inverse(a)).value(), 0.0, 1e-15);
  EXPECT_EQ(inverse(Angle(kPi)).value(), kPi);
}

TEST(Compose, GroupAxioms) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-kPi, kPi);
  for (int i = 0; i < 1000; ++i) {
    const Angle a(u(rng)), b(u(rng)), c(u(rng));
    ASSERT_TRUE(angles_equal(compose(compose(a, b), c), compose(a, compose(b, c))));
    ASSERT_TRUE(angles_equal(compose(a, b), compose(b, a)));
    ASSERT_TRUE(angles_equal(compose(a, Angle::identity()), a));
    ASSERT_TRUE(angles_equal(compose(inverse(a), a), Angle::identity()));
  }
}

TEST(AngleDifference, WrapsAcrossSeam) {
  EXPECT_NEAR(angle_difference(Angle(kPi - 0.1), Angle(-kPi + 0.1)), -0.2, 1e-14);
  EXPECT_NEAR(angle_difference(Angle(-kPi + 0.1), Angle(kPi - 0.1)), 0.2, 1e-14);
  EXPECT_TRUE(angles_equal(Angle(kPi), Angle(-kPi + 1e-13)));
  EXPECT_FALSE(angles_equal(Angle(0.0), Angle(1e-9)));
}

TEST(PotentialPhi, Examples) {
  const double tg = 0.7;
  EXPECT_EQ(potential_phi(tg, tg), 0.0);
  EXPECT_NEAR(potential_phi(tg + kPi, tg), 1.0, 1e-15);
  EXPECT_NEAR(potential_phi(tg + kPi / 2, tg), std::pow(std::sin(kPi / 4), 2), 1e-15);
  EXPECT_NEAR(potential_phi(tg + kPi / 2, tg), 0.5, 1e-15);
}

TEST(PotentialPhi, RangeAndPeriodicity) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int i = 0; i < 1000; ++i) {
    const double th = u(rng), tg = u(rng);
    const double v = potential_phi(th, tg);
    ASSERT_GE(v, 0.0);
    ASSERT_LE(v, 1.0);
    ASSERT_NEAR(potential_phi(th + kTwoPi, tg), v, 1e-13);
  }
}

TEST(GradPhi, Examples) {
  const double tg = -1.1;
  const double h = 1e-6;
  auto fd = [&](double th) {
    return (potential_phi(th + h, tg) - potential_phi(th - h, tg)) / (2 * h);
  };
  EXPECT_EQ(grad_phi(tg, tg), 0.0);
  EXPECT_NEAR(grad_phi(tg + kPi / 2, tg), 0.5, 1e-15);
  EXPECT_NEAR(fd(tg + kPi / 2), 0.5, 1e-8);
  EXPECT_NEAR(grad_phi(tg - kPi / 2, tg), -0.5, 1e-15);
  EXPECT_NEAR(fd(tg - kPi / 2), -0.5, 1e-8);
}

TEST(GradPhi, MatchesFiniteDifferenceAtRandomPoints) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-kPi, kPi);
  const double h = 1e-6;
  for (int i = 0; i < 1000; ++i) {
    const double th = u(rng), tg = u(rng);
    const double fd = (potential_phi(th + h, tg) - potential_phi(th - h, tg)) / (2 * h);
    ASSERT_LT(std::abs(grad_phi(th, tg) - fd), 1e-8);
  }
}

TEST(HessPhi, MatchesFiniteDifferenceOfGradient) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-kPi, kPi);
  const double h = 1e-6;
  for (int i = 0; i < 1000; ++i) {
    const double th = u(rng), tg = u(rng);
    const double fd = (grad_phi(th + h, tg) - grad_phi(th - h, tg)) / (2 * h);
    ASSERT_LT(std::abs(hess_phi(th, tg) - fd), 1e-8);
  }
}

TEST(PotentialPhi, LeftInvariant) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-kPi, kPi);
  for (int i = 0; i < 1000; ++i) {
    const Angle th(u(rng)), tg(u(rng)), r(u(rng));
    ASSERT_NEAR(potential_phi(compose(r, th), compose(r, tg)), potential_phi(th, tg), 1e-14);
    ASSERT_NEAR(grad_phi(compose(r, th), compose(r, tg)), grad_phi(th, tg), 1e-14);
  }
}
