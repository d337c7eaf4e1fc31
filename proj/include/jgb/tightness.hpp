#pragma once

#include <vector>

namespace jgb {

struct TwoPointEquality {
  /// Oracle gap of |x|^alpha under mass 1/2 at +-sigma.
  double gap;
  /// M sigma_n^alpha with M = 1.
  double bound_floor;
};

/// Equality case of the upper bound: the two sides must agree.
TwoPointEquality two_point_equality(double alpha, double n, double sigma);

struct ThreePointBlowup {
  /// |J| / sigma_beta^alpha from the oracle and exact moments.
  double ratio;
  /// p^(1 - alpha/beta) + p^(alpha (1/n - 1/beta)) sigma_n^(n - alpha)
  double closed_form;
  /// Offset a = sigma_n / p^(1/n) of the outer masses.
  double a;
};

/// f = |x|^alpha + |x|^n on mass 1 - p at 0 and p/2 at +-a. Shows that
/// sigma_beta with beta < n cannot replace sigma_n in the upper bound.
ThreePointBlowup three_point_blowup(double alpha, double beta, double n, double p, double sigma_n);

struct SequenceRow {
  int j;
  double sigma_q;
  double gap;
  double ratio;
};

struct LowerExponentSequence {
  std::vector<SequenceRow> rows;
  /// m = k (alpha - beta)
  double m;
  /// beta - m - alpha (1 - m/q)
  double predicted_slope;
  /// Least-squares slope of log ratio against log j over rows with j >= 2.
  double fitted_slope;
  bool decreasing;
  /// sigma_r non-increasing in j for r in {m/4, m/2, 3m/4, m}.
  bool moments_non_increasing;
};

/// Witness f = min(|x|^alpha, |x|^beta) on mass 1 - j^-m at 0 and j^-m / 2 at
/// +-j, for j = 1, 2, 4, ... <= j_max. The ratio J / sigma_q^alpha must decay
/// when q exceeds alpha/(1 + 1/k). Rejects q <= alpha/(1 + 1/k).
LowerExponentSequence lower_exponent_sequence(double beta, double alpha, int k, double q, int j_max);

}  // namespace jgb
