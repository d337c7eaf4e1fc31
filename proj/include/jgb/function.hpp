#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace jgb {

inline constexpr double inf = std::numeric_limits<double>::infinity();

/// Closed interval; either endpoint may be infinite.
struct Interval {
  double lo = -inf;
  double hi = inf;

  static Interval real_line() { return {}; }
  static Interval at_least(double lo) { return {lo, inf}; }

  bool contains(double x) const noexcept { return x >= lo && x <= hi; }
  bool operator==(const Interval&) const = default;
};

/// Whether f(x) - f(mu) is positive (above) or negative (below) away from mu.
enum class GapSign { above, below };

inline double sign_factor(GapSign s) noexcept { return s == GapSign::above ? 1.0 : -1.0; }

namespace kind {
struct Sin {};
struct Cos {};
struct Log {};
struct Sqrt {};
struct Pow4 {};
/// |x - center|^alpha
struct AbsPower {
  double alpha;
  double center;
};
/// |x - center|^alpha + |x - center|^n
struct AbsPowerSum {
  double alpha;
  double n;
  double center;
};
/// min(|x - center|^alpha, |x - center|^beta)
struct AbsPowerMin {
  double alpha;
  double beta;
  double center;
};
/// sum_i coeffs[i] x^i, lowest degree first
struct Polynomial {
  std::vector<double> coeffs;
};
struct Custom {
  std::string name;
};
}  // namespace kind

using FunctionKind = std::variant<kind::Sin, kind::Cos, kind::Log, kind::Sqrt, kind::Pow4, kind::AbsPower,
                                  kind::AbsPowerSum, kind::AbsPowerMin, kind::Polynomial, kind::Custom>;

std::string kind_name(const FunctionKind& k);

/// f(x) - f(mu) together with an estimate of its absolute rounding error.
struct Increment {
  double value;
  double noise;
};

/// A scalar function anchored at mu. The evaluation rule is shared and
/// immutable; linear shifts are recorded as a slope subtracted on evaluation,
/// g(x) = f(x) - shift * (x - mu).
class FunctionSpec {
 public:
  using Rule = std::function<double(double)>;

  static FunctionSpec builtin(FunctionKind k, double mu, std::optional<Interval> domain = std::nullopt);

  static FunctionSpec sin(double mu = 0.0) { return builtin(kind::Sin{}, mu); }
  static FunctionSpec cos(double mu = 0.0) { return builtin(kind::Cos{}, mu); }
  static FunctionSpec log(double mu, Interval domain) { return builtin(kind::Log{}, mu, domain); }
  static FunctionSpec sqrt(double mu, Interval domain = Interval::at_least(0.0)) {
    return builtin(kind::Sqrt{}, mu, domain);
  }
  static FunctionSpec pow4(double mu) { return builtin(kind::Pow4{}, mu); }
  static FunctionSpec abs_power(double alpha, double mu) { return builtin(kind::AbsPower{alpha, mu}, mu); }
  static FunctionSpec abs_power_sum(double alpha, double n, double mu) {
    return builtin(kind::AbsPowerSum{alpha, n, mu}, mu);
  }
  static FunctionSpec abs_power_min(double alpha, double beta, double mu) {
    return builtin(kind::AbsPowerMin{alpha, beta, mu}, mu);
  }
  static FunctionSpec polynomial(std::vector<double> coeffs, double mu) {
    return builtin(kind::Polynomial{std::move(coeffs)}, mu);
  }
  static FunctionSpec custom(std::string name, Rule rule, double mu, Interval domain = Interval::real_line(),
                             std::optional<double> slope_at_mu = std::nullopt);

  /// Throws Error(domain_error) outside the domain, Error(evaluation_error)
  /// when the rule is not finite.
  double operator()(double x) const;
  Increment increment(double x) const;

  double mu() const noexcept { return mu_; }
  double value_at_mu() const noexcept { return base_at_mu_; }
  const Interval& domain() const noexcept { return domain_; }
  std::optional<double> slope_at_mu() const noexcept { return slope_; }
  double shift() const noexcept { return shift_; }
  const FunctionKind& kind() const noexcept { return kind_; }

  /// Canonical description of the unshifted function (kind, mu, domain).
  /// Shifts are excluded since they leave the Jensen gap unchanged.
  std::string identity() const;

  friend FunctionSpec linear_shift(const FunctionSpec& f, double a);

 private:
  struct Evaluated {
    double value;
    double magnitude;
  };
  using InternalRule = std::function<Evaluated(double)>;

  FunctionSpec(FunctionKind k, std::shared_ptr<const InternalRule> rule, Interval domain, double mu,
               std::optional<double> slope);

  Evaluated base(double x) const;

  FunctionKind kind_;
  std::shared_ptr<const InternalRule> rule_;
  Interval domain_;
  double mu_;
  std::optional<double> slope_;
  double shift_ = 0.0;
  double base_at_mu_ = 0.0;
  double magnitude_at_mu_ = 0.0;
};

double evaluate(const FunctionSpec& f, double x);

/// g(x) = f(x) - a (x - mu), same domain and anchor.
FunctionSpec linear_shift(const FunctionSpec& f, double a);

/// f'(mu) if known analytically, otherwise a Richardson-refined finite
/// difference. At a convex kink the midpoint of the one-sided derivatives is
/// returned. Throws Error(convergence_failure) with the residual when the
/// estimate does not settle.
double select_shift_slope(const FunctionSpec& f);

struct GrowthDeclaration {
  double alpha = 2.0;
  std::optional<double> n;
  std::optional<double> beta;
  GapSign sign = GapSign::above;

  /// Throws Error(rejected_input) when the exponents are inconsistent.
  void check() const;
};

enum class GrowthRole { upper, lower };

struct ValidationReport {
  bool passed = false;
  std::string reason;
  double worst_x = 0.0;
  double worst_ratio = 0.0;
  /// Largest (upper) or smallest (lower) ratio seen on the probe grid.
  double observed_extreme = 0.0;
  int probes = 0;
};

/// Heuristic growth check on a symmetric log grid |x - mu| in [1e-8, 1e8].
/// A failed check is reported, not thrown.
ValidationReport validate_growth(const FunctionSpec& f, const GrowthDeclaration& g, GrowthRole role);

/// Sign of f(x) - f(mu) on the probe grid, if it is consistent.
std::optional<GapSign> detect_gap_sign(const FunctionSpec& f);

}  // namespace jgb
