#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "jgb/error.hpp"
#include "jgb/function.hpp"

using namespace jgb;

TEST(FunctionSpec, BuiltinsEvaluate) {
  EXPECT_DOUBLE_EQ(FunctionSpec::sin()(1.0), std::sin(1.0));
  EXPECT_DOUBLE_EQ(FunctionSpec::cos()(2.0), std::cos(2.0));
  EXPECT_DOUBLE_EQ(FunctionSpec::log(1.0, Interval::at_least(0.5))(3.0), std::log(3.0));
  EXPECT_DOUBLE_EQ(FunctionSpec::sqrt(1.0)(4.0), 2.0);
  EXPECT_DOUBLE_EQ(FunctionSpec::pow4(0.0)(-2.0), 16.0);
  EXPECT_DOUBLE_EQ(FunctionSpec::abs_power(1.5, 1.0)(5.0), 8.0);
  EXPECT_DOUBLE_EQ(FunctionSpec::abs_power_sum(1.0, 2.0, 0.0)(-3.0), 12.0);
  EXPECT_DOUBLE_EQ(FunctionSpec::abs_power_min(2.0, 1.0, 0.0)(0.5), 0.25);
  EXPECT_DOUBLE_EQ(FunctionSpec::abs_power_min(2.0, 1.0, 0.0)(4.0), 4.0);
  EXPECT_DOUBLE_EQ(FunctionSpec::polynomial({1, 2, 3}, 0.0)(2.0), 17.0);
}

TEST(FunctionSpec, DomainErrors) {
  const auto f = FunctionSpec::log(1.0, Interval::at_least(0.5));
  try {
    (void)f(0.25);
    FAIL() << "expected a domain error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::domain_error);
  }
  EXPECT_THROW(FunctionSpec::log(1.0, Interval{-1.0, inf}), Error);
  EXPECT_THROW(FunctionSpec::log(0.25, Interval::at_least(0.5)), Error);
}

TEST(FunctionSpec, CustomRuleNotFiniteIsEvaluationError) {
  const auto f = FunctionSpec::custom("blowup", [](double x) { return 1.0 / x; }, 1.0);
  try {
    (void)f(0.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::evaluation_error);
  }
}

TEST(LinearShift, SubtractsSlopeTimesOffset) {
  const auto f = FunctionSpec::sin(0.3);
  const auto g = linear_shift(f, 0.7);
  for (double x : {-2.0, 0.3, 1.0, 5.0}) EXPECT_NEAR(g(x), std::sin(x) - 0.7 * (x - 0.3), 1e-15);
  EXPECT_EQ(g.identity(), f.identity());
  EXPECT_DOUBLE_EQ(g.shift(), 0.7);
  EXPECT_DOUBLE_EQ(linear_shift(g, 0.3).shift(), 1.0);
}

TEST(LinearShift, IncrementIsDifference) {
  const auto g = linear_shift(FunctionSpec::cos(1.0), -0.25);
  const auto inc = g.increment(2.5);
  EXPECT_NEAR(inc.value, (std::cos(2.5) + 0.25 * 1.5) - std::cos(1.0), 1e-15);
  EXPECT_GE(inc.noise, 0.0);
}

TEST(ShiftSlope, AnalyticAndFiniteDifference) {
  EXPECT_DOUBLE_EQ(select_shift_slope(FunctionSpec::sin(0.0)), 1.0);
  EXPECT_NEAR(select_shift_slope(FunctionSpec::log(2.0, Interval::at_least(0.5))), 0.5, 1e-14);
  EXPECT_NEAR(select_shift_slope(FunctionSpec::pow4(1.5)), 4 * 1.5 * 1.5 * 1.5, 1e-12);
  const auto custom = FunctionSpec::custom("exp", [](double x) { return std::exp(x); }, 0.5);
  EXPECT_NEAR(select_shift_slope(custom), std::exp(0.5), 1e-8);
}

TEST(ShiftSlope, KinkGivesMidpoint) {
  const auto f = FunctionSpec::custom("kink", [](double x) { return x < 0 ? -x : 3 * x; }, 0.0);
  EXPECT_NEAR(select_shift_slope(f), 1.0, 1e-8);
}

TEST(ValidateGrowth, AcceptsMatchingExponents) {
  const auto f = linear_shift(FunctionSpec::sin(0.0), 1.0);
  const auto r = validate_growth(f, {3.0, 3.0, std::nullopt, GapSign::above}, GrowthRole::upper);
  EXPECT_TRUE(r.passed) << r.reason;
  EXPECT_GT(r.probes, 0);
}

TEST(ValidateGrowth, FlagsTooSlowCeiling) {
  const auto r = validate_growth(FunctionSpec::pow4(0.0), {2.0, 2.0, std::nullopt, GapSign::above}, GrowthRole::upper);
  EXPECT_FALSE(r.passed);
  EXPECT_FALSE(r.reason.empty());
}

TEST(ValidateGrowth, FlagsWrongNearExponent) {
  // Unshifted sin leaves a linear term near mu, so alpha = 2 fails near 0.
  const auto r = validate_growth(FunctionSpec::sin(0.0), {2.0, 2.0, std::nullopt, GapSign::above}, GrowthRole::upper);
  EXPECT_FALSE(r.passed);
}

TEST(GrowthDeclaration, RejectsInconsistent) {
  GrowthDeclaration g{2.0, 1.0, std::nullopt, GapSign::above};
  EXPECT_THROW(g.check(), Error);
  GrowthDeclaration h{2.0, std::nullopt, 3.0, GapSign::above};
  EXPECT_THROW(h.check(), Error);
}

TEST(GapSign, Detection) {
  EXPECT_EQ(detect_gap_sign(FunctionSpec::pow4(1.0)), std::nullopt);  // not shifted: linear term changes sign
  EXPECT_EQ(detect_gap_sign(linear_shift(FunctionSpec::pow4(1.0), 4.0)), GapSign::above);
  const auto lg = FunctionSpec::log(1.0, Interval::at_least(0.5));
  EXPECT_EQ(detect_gap_sign(linear_shift(lg, 1.0)), GapSign::below);
}

TEST(ValidateGrowth, ConvexIncreasingRejectsAlphaBelowTwo) {
  const auto e = FunctionSpec::custom("exp", [](double x) { return std::exp(x); }, 0.0, Interval::real_line(), 1.0);
  const auto g = linear_shift(e, 1.0);
  const auto r = validate_growth(g, {1.5, std::nullopt, 1.0, GapSign::above}, GrowthRole::lower);
  EXPECT_FALSE(r.passed);
}
