#include <gtest/gtest.h>

#include <cmath>

#include "jgb/error.hpp"
#include "jgb/tightness.hpp"
#include "oracles.hpp"

using namespace jgb;

TEST(TwoPoint, EqualityHolds) {
  for (double alpha : {0.5, 1.0, 2.0, 3.0})
    for (double sigma : {0.1, 1.0, 3.0}) {
      const auto t = two_point_equality(alpha, alpha + 1.0, sigma);
      EXPECT_NEAR(t.gap / t.bound_floor, 1.0, 1e-12);
    }
  EXPECT_THROW((void)two_point_equality(2.0, 1.0, 1.0), Error);
}

TEST(ThreePoint, RatioMatchesClosedFormAndBruteForce) {
  const double alpha = 2, beta = 1, n = 3, sn = 0.7;
  for (double p : {0.1, 1e-2, 1e-4}) {
    const auto t = three_point_blowup(alpha, beta, n, p, sn);
    EXPECT_NEAR(t.ratio / t.closed_form, 1.0, 1e-9);
    const double a = sn / std::pow(p, 1.0 / n);
    const oracle::Points pts{{-a, p / 2}, {0.0, 1 - p}, {a, p / 2}};
    const double gap = oracle::gap(
        [&](long double x) { return std::pow(std::fabs(x), (long double)alpha) + std::pow(std::fabs(x), (long double)n); },
        pts);
    const double sb = std::pow(oracle::moment_pow(pts, beta), 1.0 / beta);
    EXPECT_NEAR(t.ratio / (gap / std::pow(sb, alpha)), 1.0, 1e-12);
  }
  EXPECT_GT(three_point_blowup(2, 1, 2, 1e-4, 1.0).ratio, 1e3);
  EXPECT_THROW((void)three_point_blowup(2, 3, 2, 0.1, 1.0), Error);
}

TEST(Sequence, DecreasesWithPredictedSlope) {
  const auto s = lower_exponent_sequence(1.0, 2.0, 1, 1.5, 1024);
  EXPECT_TRUE(s.decreasing);
  EXPECT_TRUE(s.moments_non_increasing);
  EXPECT_EQ(s.rows.size(), 11u);
  EXPECT_NEAR(s.predicted_slope, -2.0 / 3.0, 1e-15);
  EXPECT_NEAR(s.fitted_slope, s.predicted_slope, 0.1 * std::abs(s.predicted_slope));
  const auto s2 = lower_exponent_sequence(0.5, 2.0, 2, 1.9, 512);
  EXPECT_TRUE(s2.decreasing);
  EXPECT_NEAR(s2.fitted_slope, s2.predicted_slope, 0.1 * std::abs(s2.predicted_slope));
}

TEST(Sequence, RejectsBadOrders) {
  EXPECT_THROW((void)lower_exponent_sequence(1.0, 2.0, 1, 1.0, 64), Error);
  EXPECT_THROW((void)lower_exponent_sequence(2.0, 2.0, 1, 1.5, 64), Error);
  EXPECT_THROW((void)lower_exponent_sequence(1.0, 2.0, 1, 1.5, 1), Error);
}

TEST(ThreePoint, ClosedFormOnGrid) {
  for (double p : {0.5, 0.1, 1e-2, 1e-3, 1e-4})
    for (double sn : {0.1, 0.5, 1.0, 2.0, 5.0}) {
      const auto t = three_point_blowup(2, 1, 3, p, sn);
      EXPECT_NEAR(t.ratio / t.closed_form, 1.0, 1e-9) << p << " " << sn;
    }
}

TEST(Sequence, BaseCaseHasUnitMoments) {
  const auto s = lower_exponent_sequence(1.0, 2.0, 1, 1.5, 2);
  ASSERT_GE(s.rows.size(), 1u);
  EXPECT_EQ(s.rows[0].j, 1);
  EXPECT_NEAR(s.rows[0].sigma_q, 1.0, 1e-15);
  EXPECT_TRUE(std::isfinite(s.rows[0].ratio));
  EXPECT_THROW((void)lower_exponent_sequence(1.0, 2.0, 1, 1.0, 8), Error);  // q exactly alpha/(1+1/k)
}
