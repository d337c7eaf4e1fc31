#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "jgb/quadrature.hpp"
#include "jgb/rng.hpp"

namespace jgb {

class DistributionSpec;

namespace dist {
/// Finite support with distinct points and positive probabilities summing to 1.
struct Discrete {
  Eigen::ArrayXd points;
  Eigen::ArrayXd probs;
  Eigen::ArrayXd cdf;
};
struct Gaussian {
  double mean;
  double stddev;
};
struct Laplace {
  double mean;
  double scale;
};
struct Uniform {
  double lo;
  double hi;
};
/// Equal-weight samples; moments are plug-in sums.
struct Empirical {
  Eigen::ArrayXd samples;
};
/// Law of the average of N independent draws from base.
struct MeanOfN {
  std::shared_ptr<const DistributionSpec> base;
  int n;
};
}  // namespace dist

class DistributionSpec {
 public:
  using Variant = std::variant<dist::Discrete, dist::Gaussian, dist::Laplace, dist::Uniform, dist::Empirical,
                               dist::MeanOfN>;

  static DistributionSpec discrete(const std::vector<std::pair<double, double>>& points);
  static DistributionSpec discrete(Eigen::ArrayXd points, Eigen::ArrayXd probs);
  static DistributionSpec gaussian(double mean, double stddev);
  static DistributionSpec laplace(double mean, double scale);
  static DistributionSpec uniform(double lo, double hi);
  static DistributionSpec empirical(Eigen::ArrayXd samples);
  static DistributionSpec mean_of_n(const DistributionSpec& base, int n);

  const Variant& variant() const noexcept { return v_; }

  template <class T>
  const T* as() const noexcept {
    return std::get_if<T>(&v_);
  }

  bool is_finite_support() const noexcept {
    return as<dist::Discrete>() != nullptr || as<dist::Empirical>() != nullptr;
  }

  /// Smallest closed interval containing the support (possibly infinite).
  std::pair<double, double> support_hull() const;

  std::string identity() const;

 private:
  explicit DistributionSpec(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

enum class MomentMethod { exact_sum, closed_form, quadrature, monte_carlo };

const char* to_string(MomentMethod m) noexcept;

/// Absolute centered moment sigma_p = (E|X - mu|^p)^(1/p). By convention
/// |t|^0 = 1 for every t, so p = 0 gives sigma_p_pow = 1.
struct MomentValue {
  double p = 0.0;
  double sigma_p = 0.0;
  double sigma_p_pow = 0.0;
  MomentMethod method = MomentMethod::exact_sum;
  /// Absolute error estimate on sigma_p_pow (95% CLT half-width for Monte Carlo).
  double abs_error_estimate = 0.0;
};

struct MomentOptions {
  std::int64_t mc_samples = 100000;
  std::uint64_t seed = 0;
  /// Route named continuous families through quadrature instead of their closed forms.
  bool prefer_quadrature = false;
  QuadratureOptions quadrature{};
};

double mean(const DistributionSpec& d);

MomentValue abs_central_moment(const DistributionSpec& d, double p, const MomentOptions& opts = {});

/// Deterministic for fixed (seed, count).
Eigen::ArrayXd sample(const DistributionSpec& d, std::int64_t count, std::uint64_t seed);

/// Mass 1/2 at mu - sigma and mu + sigma.
DistributionSpec two_point(double mu, double sigma);
/// Mass 1 - prob at mu and prob/2 at mu - a and mu + a.
DistributionSpec three_point(double mu, double a, double prob);
/// Mass 1 - j^-m at 0 and j^-m / 2 at -j and +j; sigma_r = j^(1 - m/r).
DistributionSpec spike_distribution(int j, double m);
DistributionSpec mean_of_n(const DistributionSpec& base, int n);

/// Expectation of g under a named continuous law by truncated adaptive
/// quadrature; the error includes an estimate of the dropped tails.
QuadratureResult continuous_expectation(const DistributionSpec& d, const std::function<double(double)>& g,
                                        const QuadratureOptions& opts = {});

namespace detail {
/// 8192 draws per Monte Carlo batch; batch b uses substream b.
inline constexpr std::int64_t kMonteCarloBatch = 8192;
}  // namespace detail

/// Visits the draws of d for stream (seed, purpose) in batch order,
/// calling sink(value) for each of `count` draws.
void for_each_draw(const DistributionSpec& d, std::int64_t count, std::uint64_t seed, StreamPurpose purpose,
                   const std::function<void(double)>& sink);

}  // namespace jgb
