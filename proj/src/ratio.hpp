#pragma once

#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "jgb/function.hpp"
#include "jgb/terms.hpp"

namespace jgb::detail {

enum class RatioForm {
  upper,      // |f(x) - f(mu)| / sum a d^eta
  lower,      // s (f(x) - f(mu)) * sum a d^-eta
  curvature,  // (f(x) - f(mu)) / d^2, f already shifted by its slope
};

struct RatioSample {
  double x = 0.0;
  double d = 0.0;
  double value = 0.0;
  bool reliable = false;
  bool sign_violation = false;
};

// Relative rounding tolerated on a probe before it is discarded, and the
// absolute floor below which the ratio error is negligible anyway.
inline constexpr double kRelativeNoise = 1e-8;
inline constexpr double kAbsoluteNoise = 1e-12;

class RatioFunction {
 public:
  RatioFunction(FunctionSpec f, PowerTerms terms, RatioForm form, GapSign sign = GapSign::above)
      : f_(std::move(f)), terms_(std::move(terms)), form_(form), sign_(sign) {}

  const FunctionSpec& function() const noexcept { return f_; }
  RatioForm form() const noexcept { return form_; }

  /// t(d) = sum a d^eta.
  double comparison(double d) const {
    double t = 0.0;
    for (const auto& term : terms_) t += term.coefficient * std::pow(d, term.exponent);
    return t;
  }

  /// Comparison factor: value = numerator * scale(d).
  double scale(double d) const {
    switch (form_) {
      case RatioForm::upper:
        return 1.0 / comparison(d);
      case RatioForm::lower: {
        double w = 0.0;
        for (const auto& term : terms_) w += term.coefficient * std::pow(d, -term.exponent);
        return w;
      }
      case RatioForm::curvature:
        return 1.0 / (d * d);
    }
    return 0.0;
  }

  RatioSample at(double x) const {
    RatioSample s;
    s.x = x;
    s.d = std::abs(x - f_.mu());
    const Increment inc = f_.increment(x);
    const double k = scale(s.d);
    double numerator = inc.value;
    if (form_ == RatioForm::upper) numerator = std::abs(numerator);
    if (form_ == RatioForm::lower) {
      numerator *= sign_factor(sign_);
      s.sign_violation = numerator < -4.0 * inc.noise;
    }
    double noise;
    if (form_ == RatioForm::upper) {
      const double t = comparison(s.d);
      s.value = numerator / t;
      noise = inc.noise / t;
    } else {
      s.value = numerator * k;
      noise = inc.noise * k;
    }
    s.reliable = std::isfinite(s.value) && (noise <= kRelativeNoise * std::abs(s.value) || noise <= kAbsoluteNoise);
    return s;
  }

 private:
  FunctionSpec f_;
  PowerTerms terms_;
  RatioForm form_;
  GapSign sign_;
};

/// Aitken delta-squared on a sequence converging to a limit (s0, s1, s2 in
/// order of approach). Falls back to s2 when the sequence is not monotone or
/// the correction is larger than the observed spread.
inline double aitken_limit(double s0, double s1, double s2) {
  const double d1 = s1 - s0;
  const double d2 = s2 - s1;
  if (d1 == 0.0 || d2 == 0.0 || (d1 > 0.0) != (d2 > 0.0)) return s2;
  const double denom = d2 - d1;
  if (denom == 0.0) return s2;
  const double correction = d2 * d2 / denom;
  if (!std::isfinite(correction) || std::abs(correction) > std::abs(s2 - s0)) return s2;
  return s2 - correction;
}

/// Log-log slope between two probes; 0 when either value is zero.
inline double loglog_slope(double d_a, double v_a, double d_b, double v_b) {
  if (v_a == 0.0 || v_b == 0.0 || d_a == d_b) return 0.0;
  return std::log(std::abs(v_b) / std::abs(v_a)) / std::log(d_b / d_a);
}

/// Least-squares log-log slope over the nonzero values; 0 with fewer than 2.
inline double loglog_fit(const std::vector<double>& d, const std::vector<double>& v) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (v[i] == 0.0 || !std::isfinite(v[i])) continue;
    const double x = std::log(d[i]), y = std::log(std::abs(v[i]));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  const double den = n * sxx - sx * sx;
  if (n < 2 || den == 0.0) return 0.0;
  return (n * sxy - sx * sy) / den;
}

// Slope magnitude beyond which a ratio is considered to run off to 0 or
// infinity at an end of the probe range.
inline constexpr double kTrendSlope = 0.1;

}  // namespace jgb::detail
