#include "jgb/tightness.hpp"

#include <cmath>

#include "jgb/distribution.hpp"
#include "jgb/error.hpp"
#include "jgb/function.hpp"
#include "jgb/oracle.hpp"

namespace jgb {

TwoPointEquality two_point_equality(double alpha, double n, double sigma) {
  if (!(alpha > 0.0) || !(n >= alpha)) reject("two_point_equality needs 0 < alpha <= n");
  const DistributionSpec d = two_point(0.0, sigma);
  const FunctionSpec f = FunctionSpec::abs_power(alpha, 0.0);
  const double sn = abs_central_moment(d, n).sigma_p;
  return {jensen_gap(f, d).value, std::pow(sn, alpha)};
}

ThreePointBlowup three_point_blowup(double alpha, double beta, double n, double p, double sigma_n) {
  if (!(beta > 0.0) || !(beta < n)) reject("three_point_blowup needs 0 < beta < n");
  if (!(alpha > 0.0) || !(alpha <= n)) reject("three_point_blowup needs 0 < alpha <= n");
  if (!(p > 0.0 && p < 1.0)) reject("three_point_blowup needs p in (0, 1)");
  if (!(sigma_n > 0.0)) reject("three_point_blowup needs sigma_n > 0");
  const double a = sigma_n / std::pow(p, 1.0 / n);
  const DistributionSpec d = three_point(0.0, a, p);
  const FunctionSpec f = FunctionSpec::abs_power_sum(alpha, n, 0.0);
  const double gap = std::abs(jensen_gap(f, d).value);
  const double sb = abs_central_moment(d, beta).sigma_p;
  ThreePointBlowup out;
  out.a = a;
  out.ratio = gap / std::pow(sb, alpha);
  out.closed_form =
      std::pow(p, 1.0 - alpha / beta) + std::pow(p, alpha * (1.0 / n - 1.0 / beta)) * std::pow(sigma_n, n - alpha);
  return out;
}

LowerExponentSequence lower_exponent_sequence(double beta, double alpha, int k, double q, int j_max) {
  if (k < 1) reject("k must be >= 1");
  if (!(beta >= 0.0) || !(alpha > beta)) reject("sequence needs 0 <= beta < alpha so that m > 0");
  const double floor_q = alpha / (1.0 + 1.0 / k);
  if (!(q > floor_q)) {
    reject("q = " + std::to_string(q) + " must exceed alpha/(1 + 1/k) = " + std::to_string(floor_q));
  }
  if (j_max < 2) reject("j_max must be >= 2");

  LowerExponentSequence out;
  out.m = k * (alpha - beta);
  out.predicted_slope = beta - out.m - alpha * (1.0 - out.m / q);
  out.decreasing = true;
  out.moments_non_increasing = true;

  const FunctionSpec f = FunctionSpec::abs_power_min(alpha, beta, 0.0);
  const double rs[] = {0.25 * out.m, 0.5 * out.m, 0.75 * out.m, out.m};
  double prev_sigma[4] = {inf, inf, inf, inf};
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int fitted = 0;
  for (long long j = 1; j <= j_max; j *= 2) {
    const DistributionSpec d = spike_distribution(static_cast<int>(j), out.m);
    SequenceRow row;
    row.j = static_cast<int>(j);
    row.sigma_q = abs_central_moment(d, q).sigma_p;
    row.gap = jensen_gap(f, d).value;
    row.ratio = row.gap / std::pow(row.sigma_q, alpha);
    if (!out.rows.empty() && !(row.ratio < out.rows.back().ratio)) out.decreasing = false;
    for (int i = 0; i < 4; ++i) {
      const double s = abs_central_moment(d, rs[i]).sigma_p;
      if (s > prev_sigma[i] * (1.0 + 1e-12)) out.moments_non_increasing = false;
      prev_sigma[i] = s;
    }
    if (j >= 2) {
      const double x = std::log(static_cast<double>(j)), y = std::log(row.ratio);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      ++fitted;
    }
    out.rows.push_back(row);
  }
  out.fitted_slope = fitted >= 2 ? (fitted * sxy - sx * sy) / (fitted * sxx - sx * sx) : 0.0;
  return out;
}

}  // namespace jgb
