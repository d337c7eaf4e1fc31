#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "jgb/bounds.hpp"
#include "jgb/distribution.hpp"
#include "jgb/function.hpp"

namespace jgb {

enum class GapMethod { exact_sum, quadrature, monte_carlo };

const char* to_string(GapMethod m) noexcept;

/// J = E f(X) - f(E X) with an error bar: 0 for exact sums, the quadrature
/// remainder estimate, or the 95% CLT half-width for Monte Carlo.
struct GapEstimate {
  double value = 0.0;
  GapMethod method = GapMethod::exact_sum;
  double abs_error = 0.0;
  /// Samples (Monte Carlo), nodes (quadrature) or support points (exact).
  std::int64_t count = 0;
  std::optional<std::uint64_t> seed;
  std::string function_id;
  std::string dist_id;
};

struct Budget {
  std::int64_t samples = 1000000;
  int nodes = 2048;
};

/// Throws Error(domain_error) when the support leaves the domain of f and
/// Error(evaluation_error) when f is not finite on it.
GapEstimate jensen_gap(const FunctionSpec& f, const DistributionSpec& d, const Budget& budget = {},
                       std::optional<std::uint64_t> seed = std::nullopt);

enum class Verdict { pass, fail, inconclusive };

const char* to_string(Verdict v) noexcept;

struct VerifyResult {
  Verdict verdict = Verdict::inconclusive;
  /// How far the gap lies beyond the bound (0 unless failed).
  double violation = 0.0;
  /// Distance from the gap to the bound on the allowed side (negative when on the wrong side).
  double margin = 0.0;
};

/// Absolute slack added to every comparison to absorb rounding.
inline constexpr double kVerifySlack = 1e-9;

/// Compares in the report's direction: |J| <= U, s J >= L, or lo <= J <= hi.
/// Both the gap's error bar and the bound's uncertainty count toward
/// inconclusive. Throws Error(rejected_input) when the report and the
/// estimate describe different (f, dist) pairs.
VerifyResult verify(const BoundReport& report, const GapEstimate& gap);

}  // namespace jgb
