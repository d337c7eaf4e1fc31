#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "jgb/bounds.hpp"
#include "jgb/distribution.hpp"
#include "jgb/function.hpp"
#include "jgb/oracle.hpp"

namespace jgb::cli {

/// Runs the jgb command line in-process. Exit codes: 0 success or no
/// violation, 2 a bound was violated (or an example missed its reference),
/// 1 bad input.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

struct ExampleRow {
  std::string example;
  std::string quantity;
  double computed;
  double reference;
  double rel_error;
  bool ok;
  /// "closed form" when the reference constant is stated as such,
  /// "substituted" when it comes from plugging numbers into one.
  std::string reference_kind;
};

/// Recomputes the worked-example envelope constants and coefficients.
std::vector<ExampleRow> example_rows();

/// Which bound to compute and with what exponents. kind is one of upper,
/// lower, holder, holder_balanced, variance, general_upper, general_lower.
struct BoundRequest {
  std::string kind = "upper";
  double alpha = 2.0;
  std::optional<double> n;
  std::optional<double> beta;
  std::optional<int> k;
  /// Hoelder q; every valid factor of k + 1 when absent.
  std::optional<int> q;
  /// Detected from the function when absent.
  std::optional<GapSign> sign;
  PowerTerms terms;
};

struct BoundOutcome {
  BoundReport report;
  VerifyResult verdict;
};

/// Envelope, moments and bound for (f, d), each checked against `gap`.
std::vector<BoundOutcome> compute_bounds(const FunctionSpec& f, const DistributionSpec& d, const BoundRequest& req,
                                         const MomentOptions& opts, const GapEstimate& gap);

enum class SweepMode { sigma, mean_of_n };

struct SweepRow {
  double param;
  double sigma2;
  double gap;
  double gap_error;
  std::optional<double> bound;
  std::string verdict;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  /// Least-squares slopes of log|gap| and log sigma_2^2 against log param.
  double gap_slope;
  double sigma2_slope;
};

/// sigma mode: two_point(mu, s) for s in grid. mean_of_n mode: mean_of_n(base, N).
/// Rejects grids with fewer than 4 points.
SweepResult sweep(const FunctionSpec& f, SweepMode mode, const std::optional<DistributionSpec>& base,
                  const std::vector<double>& grid, std::int64_t samples, std::uint64_t seed,
                  const BoundRequest* bound = nullptr);

}  // namespace jgb::cli
