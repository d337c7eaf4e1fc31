#include <gtest/gtest.h>

#include <cmath>

#include "jgb/error.hpp"
#include "jgb/oracle.hpp"
#include "oracles.hpp"

using namespace jgb;

TEST(Gap, DiscreteIsExactSum) {
  const oracle::Points pts{{-2.0, 0.1}, {0.5, 0.6}, {3.0, 0.3}};
  const auto d = DistributionSpec::discrete(std::vector<std::pair<double, double>>(pts.begin(), pts.end()));
  const double mu = mean(d);
  const auto g = jensen_gap(FunctionSpec::cos(mu), d);
  EXPECT_EQ(g.method, GapMethod::exact_sum);
  EXPECT_EQ(g.abs_error, 0.0);
  EXPECT_EQ(g.count, 3);
  EXPECT_NEAR(g.value, oracle::gap([](long double x) { return std::cos(x); }, pts), 1e-16);
}

TEST(Gap, ContinuousQuadrature) {
  const auto g = jensen_gap(FunctionSpec::cos(0.0), DistributionSpec::gaussian(0.0, 0.5));
  EXPECT_EQ(g.method, GapMethod::quadrature);
  EXPECT_NEAR(g.value, std::exp(-0.125) - 1.0, 1e-14);
  const auto u = jensen_gap(FunctionSpec::pow4(1.0), DistributionSpec::uniform(0.0, 2.0));
  EXPECT_NEAR(u.value, 32.0 / 10.0 - 1.0, 1e-13);
  const auto l = jensen_gap(FunctionSpec::polynomial({0, 0, 1}, 2.0), DistributionSpec::laplace(2.0, 0.7));
  EXPECT_NEAR(l.value, 2 * 0.49, 1e-12);
}

TEST(Gap, MonteCarloCoversTruth) {
  const auto d = mean_of_n(DistributionSpec::uniform(-1, 1), 4);
  const auto g = jensen_gap(FunctionSpec::cos(0.0), d, {.samples = 400000}, 11);
  EXPECT_EQ(g.method, GapMethod::monte_carlo);
  ASSERT_TRUE(g.seed);
  // E cos(mean of 4 uniforms) = (sin(1/4) * 4)^4
  const double truth = std::pow(4 * std::sin(0.25), 4) - 1.0;
  EXPECT_NEAR(g.value, truth, 2 * g.abs_error);
  const auto again = jensen_gap(FunctionSpec::cos(0.0), d, {.samples = 400000}, 11);
  EXPECT_EQ(g.value, again.value);
}

TEST(Gap, DomainChecked) {
  const auto f = FunctionSpec::log(1.0, Interval::at_least(0.5));
  try {
    (void)jensen_gap(f, DistributionSpec::uniform(0.0, 2.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::domain_error);
  }
  EXPECT_THROW((void)jensen_gap(f, DistributionSpec::gaussian(1.0, 0.1)), Error);
}

TEST(Gap, DegenerateIsZero) {
  const auto g = jensen_gap(FunctionSpec::sin(0.3), DistributionSpec::discrete({{0.3, 1.0}}));
  EXPECT_EQ(g.value, 0.0);
}

TEST(Verify, Directions) {
  BoundReport up;
  up.direction = BoundDirection::abs_upper;
  up.value = 1.0;
  up.function_id = "f";
  up.dist_id = "d";
  GapEstimate g;
  g.function_id = "f";
  g.dist_id = "d";
  g.value = -0.9;
  EXPECT_EQ(verify(up, g).verdict, Verdict::pass);
  g.value = 1.1;
  const auto v = verify(up, g);
  EXPECT_EQ(v.verdict, Verdict::fail);
  EXPECT_NEAR(v.violation, 0.1, 1e-12);
  g.value = 1.05;
  g.abs_error = 0.1;
  EXPECT_EQ(verify(up, g).verdict, Verdict::inconclusive);

  BoundReport lo = up;
  lo.direction = BoundDirection::signed_lower;
  lo.sign = GapSign::below;
  lo.value = 0.2;
  g.abs_error = 0;
  g.value = -0.3;
  EXPECT_EQ(verify(lo, g).verdict, Verdict::pass);
  g.value = -0.1;
  EXPECT_EQ(verify(lo, g).verdict, Verdict::fail);

  BoundReport iv = up;
  iv.direction = BoundDirection::interval;
  iv.lo = -1;
  iv.hi = 0.5;
  g.value = 0.0;
  EXPECT_EQ(verify(iv, g).verdict, Verdict::pass);
  g.value = 0.6;
  EXPECT_EQ(verify(iv, g).verdict, Verdict::fail);

  g.dist_id = "other";
  EXPECT_THROW((void)verify(up, g), Error);
}
