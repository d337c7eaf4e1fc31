#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "jgb/distribution.hpp"
#include "jgb/error.hpp"
#include "jgb/summation.hpp"
#include "oracles.hpp"

using namespace jgb;

TEST(Discrete, ValidatesInput) {
  EXPECT_THROW(DistributionSpec::discrete({{0.0, 0.5}, {1.0, 0.4}}), Error);
  EXPECT_THROW(DistributionSpec::discrete({{0.0, 0.5}, {0.0, 0.5}}), Error);
  EXPECT_THROW(DistributionSpec::discrete({{0.0, -0.5}, {1.0, 1.5}}), Error);
  EXPECT_THROW(DistributionSpec::discrete(std::vector<std::pair<double, double>>{}), Error);
  EXPECT_THROW(DistributionSpec::gaussian(0.0, 0.0), Error);
  EXPECT_THROW(DistributionSpec::uniform(1.0, 1.0), Error);
  EXPECT_THROW(mean_of_n(DistributionSpec::uniform(0, 1), 0), Error);
}

TEST(Discrete, MomentsMatchBruteForce) {
  const oracle::Points pts{{-1.3, 0.2}, {0.4, 0.5}, {2.9, 0.3}};
  std::vector<std::pair<double, double>> v(pts.begin(), pts.end());
  const auto d = DistributionSpec::discrete(v);
  EXPECT_NEAR(mean(d), static_cast<double>(oracle::mean(pts)), 1e-15);
  for (double p : {0.0, 0.5, 1.0, 2.0, 3.5}) {
    const auto m = abs_central_moment(d, p);
    EXPECT_EQ(m.method, MomentMethod::exact_sum);
    EXPECT_NEAR(m.sigma_p_pow, oracle::moment_pow(pts, p), 1e-13) << p;
  }
  EXPECT_DOUBLE_EQ(abs_central_moment(d, 0.0).sigma_p_pow, 1.0);
}

TEST(ClosedForms, AgainstSimpson) {
  const auto g = DistributionSpec::gaussian(0.3, 1.7);
  const auto l = DistributionSpec::laplace(-1.0, 0.6);
  for (double p : {0.5, 1.0, 1.5, 2.0, 3.0, 4.0}) {
    const double og = oracle::gaussian_expectation([&](double x) { return std::pow(std::abs(x - 0.3), p); }, 0.3, 1.7);
    const double ol = oracle::laplace_expectation([&](double x) { return std::pow(std::abs(x + 1.0), p); }, -1.0, 0.6);
    EXPECT_NEAR(abs_central_moment(g, p).sigma_p_pow / og, 1.0, 1e-9) << p;
    EXPECT_NEAR(abs_central_moment(l, p).sigma_p_pow / ol, 1.0, 1e-9) << p;
  }
  // sqrt(2/pi)
  EXPECT_NEAR(abs_central_moment(DistributionSpec::gaussian(0, 1), 1.0).sigma_p, 0.7978845608028654, 1e-15);
  const auto u = DistributionSpec::uniform(-1.0, 3.0);
  EXPECT_NEAR(abs_central_moment(u, 2.0).sigma_p_pow, 16.0 / 12.0, 1e-15);
}

TEST(ClosedForms, QuadratureRouteAgrees) {
  MomentOptions q;
  q.prefer_quadrature = true;
  for (const auto& d : {DistributionSpec::gaussian(0, 2), DistributionSpec::laplace(1, 0.5),
                        DistributionSpec::uniform(-2, 5)}) {
    for (double p : {0.5, 1.0, 2.5, 4.0}) {
      const auto a = abs_central_moment(d, p);
      const auto b = abs_central_moment(d, p, q);
      EXPECT_EQ(b.method, MomentMethod::quadrature);
      EXPECT_NEAR(b.sigma_p_pow / a.sigma_p_pow, 1.0, 1e-9) << d.identity() << " p=" << p;
    }
  }
}

TEST(ContinuousExpectation, GaussianCos) {
  const auto d = DistributionSpec::gaussian(0.0, 0.8);
  const auto r = continuous_expectation(d, [](double x) { return std::cos(x); });
  EXPECT_NEAR(r.value, std::exp(-0.32), 1e-13);
  EXPECT_LT(r.abs_error, 1e-10);
}

TEST(ContinuousExpectation, NonDecayingTailUnsupported) {
  const auto d = DistributionSpec::laplace(0.0, 1.0);
  EXPECT_THROW(continuous_expectation(d, [](double x) { return std::exp(2 * std::abs(x)); }), Error);
}

TEST(Constructions, TwoThreeSpike) {
  const auto t = two_point(1.0, 0.5);
  EXPECT_NEAR(abs_central_moment(t, 3.0).sigma_p, 0.5, 1e-15);
  const auto th = three_point(0.0, 2.0, 0.1);
  EXPECT_NEAR(abs_central_moment(th, 2.0).sigma_p_pow, 0.4, 1e-15);
  const double m = 1.5;
  for (int j : {1, 2, 8, 64}) {
    const auto s = spike_distribution(j, m);
    for (double r : {0.5, 1.0, 1.5}) {
      EXPECT_NEAR(abs_central_moment(s, r).sigma_p / std::pow(j, 1.0 - m / r), 1.0, 1e-12) << j << " " << r;
    }
  }
}

TEST(MeanOfN, MomentsScaleAndAreExactForDiscreteSecondMoment) {
  const auto d = mean_of_n(two_point(0.0, 1.0), 4);
  const auto m2 = abs_central_moment(d, 2.0);
  EXPECT_NEAR(m2.sigma_p_pow, 0.25, std::max(m2.abs_error_estimate, 1e-12));
  EXPECT_EQ(mean(d), 0.0);
  const auto u = mean_of_n(DistributionSpec::uniform(-1, 1), 16);
  const auto mu2 = abs_central_moment(u, 2.0, {.mc_samples = 200000, .seed = 3});
  EXPECT_NEAR(mu2.sigma_p_pow, 1.0 / 48.0, 3 * mu2.abs_error_estimate);
}

TEST(Sampling, DeterministicAndSeedSensitive) {
  const auto d = DistributionSpec::laplace(0.0, 1.0);
  const auto a = sample(d, 20000, 42);
  const auto b = sample(d, 20000, 42);
  const auto c = sample(d, 20000, 43);
  EXPECT_TRUE((a == b).all());
  EXPECT_FALSE((a == c).all());
  EXPECT_NEAR(a.mean(), 0.0, 0.05);
  EXPECT_NEAR((a * a).mean(), 2.0, 0.1);
}

TEST(Sampling, PrefixStable) {
  const auto d = DistributionSpec::gaussian(1.0, 2.0);
  const auto a = sample(d, 10000, 9);
  const auto b = sample(d, 30000, 9);
  EXPECT_TRUE((a == b.head(10000)).all());
}

TEST(Empirical, PlugInMoments) {
  Eigen::ArrayXd s(4);
  s << 1.0, 2.0, 4.0, 9.0;
  const auto d = DistributionSpec::empirical(s);
  EXPECT_DOUBLE_EQ(mean(d), 4.0);
  EXPECT_NEAR(abs_central_moment(d, 2.0).sigma_p_pow, (9.0 + 4.0 + 0.0 + 25.0) / 4.0, 1e-14);
}

TEST(ExactSum, CancelsExactly) {
  ExactSum s;
  for (double x : {1e100, 1.0, -1e100, 1e-20}) s.add(x);
  EXPECT_EQ(s.value(), 1.0 + 1e-20);
}

TEST(Identity, StableStrings) {
  EXPECT_EQ(DistributionSpec::gaussian(0, 1).identity(), DistributionSpec::gaussian(0, 1).identity());
  EXPECT_NE(DistributionSpec::gaussian(0, 1).identity(), DistributionSpec::gaussian(0, 2).identity());
}
