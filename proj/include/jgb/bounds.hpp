#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "jgb/distribution.hpp"
#include "jgb/envelope.hpp"
#include "jgb/function.hpp"
#include "jgb/terms.hpp"

namespace jgb {

enum class BoundKind {
  upper_two_form,
  lower_cauchy_schwarz,
  lower_holder,
  lower_holder_balanced,
  variance_interval,
  general_upper,
  general_lower,
};

const char* to_string(BoundKind k) noexcept;

/// What the bound constrains: |J| from above, the signed gap s*J from below,
/// or J itself inside [lo, hi].
enum class BoundDirection { abs_upper, signed_lower, interval };

const char* to_string(BoundDirection d) noexcept;

struct BoundParams {
  std::optional<double> alpha;
  std::optional<double> n;
  std::optional<double> beta;
  std::optional<int> k;
  std::optional<int> q;
  std::optional<double> p;
  PowerTerms terms;
};

struct BoundReport {
  BoundKind kind = BoundKind::upper_two_form;
  BoundDirection direction = BoundDirection::abs_upper;
  /// Upper: tight form. Lower: the bound on s*J. Interval: the upper end.
  double value = 0.0;
  /// Loose form M (1 + sigma_n^(n - alpha)) sigma_n^alpha, upper_two_form only.
  std::optional<double> loose_value;
  /// variance_interval only.
  double lo = 0.0;
  double hi = 0.0;
  GapSign sign = GapSign::above;
  std::vector<EnvelopeConstant> envelopes;
  std::vector<MomentValue> moments_used;
  BoundParams params;
  bool valid = false;
  /// Propagated from the moments' error estimates (first order); the formula
  /// itself is exact.
  double uncertainty = 0.0;
  std::string function_id;
  std::string dist_id;
};

/// Exact binomial coefficient; rejects n > 60.
std::uint64_t binomial(int n, int k);

/// M (sigma_alpha^alpha + sigma_n^n), with the loose form alongside.
BoundReport upper_bound_two_form(const EnvelopeConstant& m, const DistributionSpec& d, double alpha, double n,
                                 const MomentOptions& opts = {});

/// M sigma_{alpha/2}^alpha / (1 + sigma_{alpha-beta}^{alpha-beta}).
BoundReport lower_bound_cauchy_schwarz(const EnvelopeConstant& m, const DistributionSpec& d, double alpha,
                                       double beta, const MomentOptions& opts = {});

/// Hoelder form with integer k >= 1 and a factor q >= 2 of k + 1.
BoundReport lower_bound_holder(const EnvelopeConstant& m, const DistributionSpec& d, double alpha, double beta, int k,
                               int q, const MomentOptions& opts = {});

/// q = k + 1: M sigma_{alpha/(1+1/k)}^alpha / [sum_l C(k,l) sigma_{l(alpha-beta)}^{l(alpha-beta)}]^(1/k).
BoundReport lower_bound_holder_balanced(const EnvelopeConstant& m, const DistributionSpec& d, double alpha,
                                        double beta, int k, const MomentOptions& opts = {});

/// Valid q for a given k: the factors of k + 1 other than 1.
std::vector<int> holder_q_choices(int k);

/// [inf h * Var, sup h * Var]; unbounded h gives an infinite end.
BoundReport variance_interval(const FunctionSpec& f, const DistributionSpec& d, const MomentOptions& opts = {});
BoundReport variance_interval(const HEnvelope& h, const DistributionSpec& d, const MomentOptions& opts = {});

enum class BoundMode { upper, lower };

/// Upper: sup(|f - f(mu)| / t) * sum a_eta sigma_eta^eta.
/// Lower: inf(s (f - f(mu)) sum a_eta |x - mu|^-eta) times
///   sigma_{alpha/2}^alpha / sum a_eta sigma_{alpha-eta}^{alpha-eta}   (k absent or 1)
///   sigma_{alpha/(1+1/k)}^alpha / (sum over k-tuples of a_eta1..a_etak sigma_{k alpha - sum eta})^(1/k)
/// where alpha is the largest exponent.
BoundReport general_bounds(const FunctionSpec& f, const DistributionSpec& d, const PowerTerms& terms, BoundMode mode,
                           std::optional<int> k = std::nullopt, GapSign sign = GapSign::above,
                           const MomentOptions& opts = {});

/// Same combination from a precomputed general envelope.
BoundReport general_bounds(const EnvelopeConstant& m, const DistributionSpec& d, BoundMode mode,
                           std::optional<int> k = std::nullopt, const MomentOptions& opts = {});

}  // namespace jgb
