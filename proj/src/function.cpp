#include "jgb/function.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "jgb/error.hpp"
#include "ratio.hpp"

namespace jgb {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::optional<double> analytic_slope(const FunctionKind& k, double mu) {
  return std::visit(
      overloaded{
          [&](const kind::Sin&) -> std::optional<double> { return std::cos(mu); },
          [&](const kind::Cos&) -> std::optional<double> { return -std::sin(mu); },
          [&](const kind::Log&) -> std::optional<double> { return 1.0 / mu; },
          [&](const kind::Sqrt&) -> std::optional<double> {
            if (mu <= 0.0) return std::nullopt;
            return 0.5 / std::sqrt(mu);
          },
          [&](const kind::Pow4&) -> std::optional<double> { return 4.0 * mu * mu * mu; },
          [&](const kind::AbsPower& p) -> std::optional<double> {
            const double t = mu - p.center;
            if (t == 0.0) return p.alpha > 1.0 ? std::optional<double>(0.0) : std::nullopt;
            return p.alpha * std::pow(std::abs(t), p.alpha - 1.0) * (t > 0 ? 1.0 : -1.0);
          },
          [&](const kind::AbsPowerSum& p) -> std::optional<double> {
            const double t = mu - p.center;
            if (t == 0.0) return std::min(p.alpha, p.n) > 1.0 ? std::optional<double>(0.0) : std::nullopt;
            const double s = t > 0 ? 1.0 : -1.0;
            const double a = std::abs(t);
            return s * (p.alpha * std::pow(a, p.alpha - 1.0) + p.n * std::pow(a, p.n - 1.0));
          },
          [&](const kind::AbsPowerMin& p) -> std::optional<double> {
            if (mu != p.center) return std::nullopt;
            return std::max(p.alpha, p.beta) > 1.0 ? std::optional<double>(0.0) : std::nullopt;
          },
          [&](const kind::Polynomial& p) -> std::optional<double> {
            double d = 0.0;
            for (std::size_t i = p.coeffs.size(); i-- > 1;) d = d * mu + static_cast<double>(i) * p.coeffs[i];
            return d;
          },
          [&](const kind::Custom&) -> std::optional<double> { return std::nullopt; },
      },
      k);
}

}  // namespace

std::string kind_name(const FunctionKind& k) {
  return std::visit(overloaded{
                        [](const kind::Sin&) { return std::string("sin"); },
                        [](const kind::Cos&) { return std::string("cos"); },
                        [](const kind::Log&) { return std::string("log"); },
                        [](const kind::Sqrt&) { return std::string("sqrt"); },
                        [](const kind::Pow4&) { return std::string("pow4"); },
                        [](const kind::AbsPower&) { return std::string("abs_power"); },
                        [](const kind::AbsPowerSum&) { return std::string("abs_power_sum"); },
                        [](const kind::AbsPowerMin&) { return std::string("abs_power_min"); },
                        [](const kind::Polynomial&) { return std::string("polynomial"); },
                        [](const kind::Custom& c) { return "custom:" + c.name; },
                    },
                    k);
}

FunctionSpec::FunctionSpec(FunctionKind k, std::shared_ptr<const InternalRule> rule, Interval domain, double mu,
                           std::optional<double> slope)
    : kind_(std::move(k)), rule_(std::move(rule)), domain_(domain), mu_(mu), slope_(slope) {
  if (!(domain_.lo < domain_.hi)) reject("function domain must be a non-degenerate interval");
  if (!std::isfinite(mu_) || !domain_.contains(mu_)) reject("anchor mu = " + num(mu_) + " lies outside the domain");
  const Evaluated at_mu = (*rule_)(mu_);
  if (!std::isfinite(at_mu.value)) {
    throw Error(ErrorCode::evaluation_error, "function is not finite at mu = " + num(mu_));
  }
  base_at_mu_ = at_mu.value;
  magnitude_at_mu_ = at_mu.magnitude;
}

FunctionSpec FunctionSpec::builtin(FunctionKind k, double mu, std::optional<Interval> domain) {
  Interval dom = domain.value_or(Interval::real_line());
  InternalRule rule = std::visit(
      overloaded{
          [](const kind::Sin&) -> InternalRule {
            return [](double x) { const double v = std::sin(x); return Evaluated{v, std::abs(v)}; };
          },
          [](const kind::Cos&) -> InternalRule {
            return [](double x) { const double v = std::cos(x); return Evaluated{v, std::abs(v)}; };
          },
          [&](const kind::Log&) -> InternalRule {
            if (!domain) reject("log requires an explicit closed domain [a, b] with a > 0");
            if (!(dom.lo > 0.0)) reject("log domain must have a positive lower endpoint");
            return [](double x) { const double v = std::log(x); return Evaluated{v, std::abs(v)}; };
          },
          [&](const kind::Sqrt&) -> InternalRule {
            if (!domain) dom = Interval::at_least(0.0);
            if (dom.lo < 0.0) reject("sqrt domain must lie in [0, inf)");
            return [](double x) { const double v = std::sqrt(x); return Evaluated{v, v}; };
          },
          [](const kind::Pow4&) -> InternalRule {
            return [](double x) { const double s = x * x; const double v = s * s; return Evaluated{v, v}; };
          },
          [](const kind::AbsPower& p) -> InternalRule {
            if (!(p.alpha > 0.0)) reject("abs_power exponent must be positive");
            return [p](double x) { const double v = std::pow(std::abs(x - p.center), p.alpha); return Evaluated{v, v}; };
          },
          [](const kind::AbsPowerSum& p) -> InternalRule {
            if (!(p.alpha > 0.0) || !(p.n > 0.0)) reject("abs_power_sum exponents must be positive");
            return [p](double x) {
              const double t = std::abs(x - p.center);
              const double v = std::pow(t, p.alpha) + std::pow(t, p.n);
              return Evaluated{v, v};
            };
          },
          [](const kind::AbsPowerMin& p) -> InternalRule {
            if (!(p.alpha > 0.0) || !(p.beta >= 0.0)) reject("abs_power_min exponents must be non-negative");
            return [p](double x) {
              const double t = std::abs(x - p.center);
              const double v = std::min(std::pow(t, p.alpha), std::pow(t, p.beta));
              return Evaluated{v, v};
            };
          },
          [](const kind::Polynomial& p) -> InternalRule {
            if (p.coeffs.empty()) reject("polynomial needs at least one coefficient");
            return [c = p.coeffs](double x) {
              double v = 0.0;
              double m = 0.0;
              const double ax = std::abs(x);
              for (std::size_t i = c.size(); i-- > 0;) {
                v = v * x + c[i];
                m = m * ax + std::abs(c[i]);
              }
              return Evaluated{v, m};
            };
          },
          [](const kind::Custom&) -> InternalRule {
            reject("custom functions are built with FunctionSpec::custom");
          },
      },
      k);
  auto shared = std::make_shared<const InternalRule>(std::move(rule));
  const auto slope = analytic_slope(k, mu);
  return FunctionSpec(std::move(k), std::move(shared), dom, mu, slope);
}

FunctionSpec FunctionSpec::custom(std::string name, Rule rule, double mu, Interval domain,
                                  std::optional<double> slope_at_mu) {
  if (!rule) reject("custom function needs an evaluation rule");
  auto wrapped = std::make_shared<const InternalRule>([r = std::move(rule)](double x) {
    const double v = r(x);
    return Evaluated{v, std::abs(v)};
  });
  return FunctionSpec(kind::Custom{std::move(name)}, std::move(wrapped), domain, mu, slope_at_mu);
}

FunctionSpec::Evaluated FunctionSpec::base(double x) const {
  if (!domain_.contains(x)) {
    throw Error(ErrorCode::domain_error, "x = " + num(x) + " lies outside the domain [" + num(domain_.lo) + ", " +
                                             num(domain_.hi) + "]");
  }
  const Evaluated e = (*rule_)(x);
  if (!std::isfinite(e.value)) throw Error(ErrorCode::evaluation_error, "function is not finite at x = " + num(x));
  return e;
}

double FunctionSpec::operator()(double x) const { return base(x).value - shift_ * (x - mu_); }

Increment FunctionSpec::increment(double x) const {
  const Evaluated e = base(x);
  const double linear = shift_ * (x - mu_);
  const double value = (e.value - base_at_mu_) - linear;
  const double noise = 4.0 * kEps * (e.magnitude + magnitude_at_mu_ + std::abs(linear));
  return {value, noise};
}

std::string FunctionSpec::identity() const {
  std::ostringstream os;
  os << kind_name(kind_);
  std::visit(overloaded{
                 [&](const kind::AbsPower& p) { os << "(" << num(p.alpha) << ";" << num(p.center) << ")"; },
                 [&](const kind::AbsPowerSum& p) {
                   os << "(" << num(p.alpha) << "," << num(p.n) << ";" << num(p.center) << ")";
                 },
                 [&](const kind::AbsPowerMin& p) {
                   os << "(" << num(p.alpha) << "," << num(p.beta) << ";" << num(p.center) << ")";
                 },
                 [&](const kind::Polynomial& p) {
                   os << "(";
                   for (std::size_t i = 0; i < p.coeffs.size(); ++i) os << (i ? "," : "") << num(p.coeffs[i]);
                   os << ")";
                 },
                 [](const auto&) {},
             },
             kind_);
  os << "@mu=" << num(mu_) << " on [" << num(domain_.lo) << "," << num(domain_.hi) << "]";
  return os.str();
}

double evaluate(const FunctionSpec& f, double x) { return f(x); }

FunctionSpec linear_shift(const FunctionSpec& f, double a) {
  FunctionSpec g = f;
  g.shift_ += a;
  if (g.slope_) *g.slope_ -= a;
  return g;
}

namespace {

// Richardson-refined one-sided difference (direction +1 or -1). Returns the
// estimate and the change between the last two refinement levels.
std::pair<double, double> one_sided_slope(const FunctionSpec& f, double h, double dir) {
  const double mu = f.mu();
  const double f0 = f(mu);
  auto fd = [&](double step) { return dir * (f(mu + dir * step) - f0) / step; };
  const double d1 = fd(h), d2 = fd(h / 2), d3 = fd(h / 4);
  const double r1 = 2.0 * d2 - d1;
  const double r2 = 2.0 * d3 - d2;
  return {r2, std::abs(r2 - r1)};
}

std::pair<double, double> central_slope(const FunctionSpec& f, double h) {
  const double mu = f.mu();
  auto cd = [&](double step) { return (f(mu + step) - f(mu - step)) / (2.0 * step); };
  const double d1 = cd(h), d2 = cd(h / 2), d3 = cd(h / 4);
  const double r1 = (4.0 * d2 - d1) / 3.0;
  const double r2 = (4.0 * d3 - d2) / 3.0;
  return {r2, std::abs(r2 - r1)};
}

}  // namespace

double select_shift_slope(const FunctionSpec& f) {
  if (f.slope_at_mu()) return *f.slope_at_mu();

  const double mu = f.mu();
  const double h = std::max(std::abs(mu), 1.0) * std::cbrt(kEps);
  const bool right = f.domain().contains(mu + h);
  const bool left = f.domain().contains(mu - h);
  auto tolerance = [](double v) { return 1e-5 * std::max(1.0, std::abs(v)); };
  auto require = [&](std::pair<double, double> est, const char* what) {
    if (!(est.second <= tolerance(est.first)) || !std::isfinite(est.first)) {
      throw Error(ErrorCode::convergence_failure,
                  std::string("finite-difference ") + what + " slope at mu did not converge", est.second);
    }
    return est.first;
  };

  if (!right && !left) reject("domain too narrow around mu for a finite-difference slope");
  if (!left) return require(one_sided_slope(f, h, +1.0), "forward");
  if (!right) return require(one_sided_slope(f, h, -1.0), "backward");

  const auto fwd = one_sided_slope(f, h, +1.0);
  const auto bwd = one_sided_slope(f, h, -1.0);
  const double kink_tol = 1e-4 * std::max({1.0, std::abs(fwd.first), std::abs(bwd.first)});
  if (std::isfinite(fwd.first) && std::isfinite(bwd.first) && std::abs(fwd.first - bwd.first) > kink_tol) {
    // Sub-gradient interval [f'_-(mu), f'_+(mu)]: its midpoint.
    return 0.5 * (require(fwd, "forward") + require(bwd, "backward"));
  }
  return require(central_slope(f, h), "central");
}

void GrowthDeclaration::check() const {
  if (!(alpha > 0.0)) reject("growth exponent alpha must be positive");
  if (n && !(*n >= alpha)) reject("growth exponent n must satisfy n >= alpha");
  if (beta && !(*beta >= 0.0 && *beta <= alpha)) reject("growth exponent beta must lie in [0, alpha]");
}

namespace {

// |x - mu| = 10^(-8 + i/2), i = 0..32, on each side, plus finite endpoints.
struct ProbeSide {
  double end;
  std::vector<double> xs;
};

std::vector<ProbeSide> validation_probes(const FunctionSpec& f) {
  std::vector<ProbeSide> sides;
  const double mu = f.mu();
  for (double dir : {1.0, -1.0}) {
    std::vector<double> xs;
    const double end = dir > 0 ? f.domain().hi : f.domain().lo;
    const double reach = std::abs(end - mu);
    if (reach == 0.0) continue;
    for (int i = 0; i <= 32; ++i) {
      const double d = std::pow(10.0, -8.0 + 0.5 * i);
      if (d < reach) xs.push_back(mu + dir * d);
    }
    if (std::isfinite(end)) xs.push_back(end);
    sides.push_back({end, std::move(xs)});
  }
  return sides;
}

}  // namespace

ValidationReport validate_growth(const FunctionSpec& f, const GrowthDeclaration& g, GrowthRole role) {
  g.check();
  using detail::RatioForm;
  PowerTerms terms;
  if (role == GrowthRole::upper) {
    if (!g.n) reject("upper-role validation needs the growth ceiling n");
    terms = {{g.alpha, 1.0}, {*g.n, 1.0}};
  } else {
    if (!g.beta) reject("lower-role validation needs the growth floor beta");
    terms = {{*g.beta, 1.0}, {g.alpha, 1.0}};
  }
  const bool upper = role == GrowthRole::upper;
  const detail::RatioFunction ratio(f, terms, upper ? RatioForm::upper : RatioForm::lower, g.sign);

  ValidationReport report;
  report.passed = true;
  report.observed_extreme = upper ? 0.0 : inf;
  bool any_reliable = false;

  auto fail = [&](std::string why, const detail::RatioSample& s) {
    if (!report.passed) return;
    report.passed = false;
    report.reason = std::move(why);
    report.worst_x = s.x;
    report.worst_ratio = s.value;
  };

  const auto sides = validation_probes(f);
  for (const auto& side : sides) {
    std::vector<detail::RatioSample> reliable;
    for (double x : side.xs) {
      detail::RatioSample s;
      try {
        s = ratio.at(x);
      } catch (const Error& e) {
        s.x = x;
        s.value = std::numeric_limits<double>::quiet_NaN();
        fail(std::string("evaluation failed: ") + e.what(), s);
        continue;
      }
      ++report.probes;
      if (!upper && s.sign_violation) fail("f(x) - f(mu) has the wrong sign", s);
      if (!s.reliable) continue;
      any_reliable = true;
      reliable.push_back(s);
      const bool worse = upper ? s.value > report.observed_extreme : s.value < report.observed_extreme;
      if (worse) {
        report.observed_extreme = s.value;
        if (report.passed) {
          report.worst_x = s.x;
          report.worst_ratio = s.value;
        }
      }
    }
    const std::size_t m = reliable.size();
    if (m >= 3) {
      const auto& n1 = reliable[0];
      const auto& n3 = reliable[2];
      const double near = detail::loglog_slope(n1.d, n1.value, n3.d, n3.value);
      if (upper && near < -detail::kTrendSlope && n1.value > n3.value) fail("ratio diverges as x -> mu", n1);
      if (!upper && near > detail::kTrendSlope && n1.value < n3.value) fail("ratio tends to 0 as x -> mu", n1);

      if (std::isinf(side.end)) {
        const auto& f1 = reliable[m - 3];
        const auto& f3 = reliable[m - 1];
        const double far = detail::loglog_slope(f1.d, f1.value, f3.d, f3.value);
        if (upper && far > detail::kTrendSlope && f3.value > f1.value) fail("ratio diverges as |x| -> inf", f3);
        if (!upper && far < -detail::kTrendSlope && f3.value < f1.value) fail("ratio tends to 0 as |x| -> inf", f3);
      }
    }
  }
  if (!any_reliable) {
    report.passed = false;
    if (report.reason.empty()) report.reason = "no probe escaped rounding noise";
  }
  if (report.passed && !upper && !(report.observed_extreme > 0.0)) {
    report.passed = false;
    report.reason = "ratio is not bounded away from 0";
  }
  return report;
}

std::optional<GapSign> detect_gap_sign(const FunctionSpec& f) {
  bool pos = false, neg = false;
  for (const auto& side : validation_probes(f)) {
    for (double x : side.xs) {
      Increment inc;
      try {
        inc = f.increment(x);
      } catch (const Error&) {
        continue;
      }
      if (inc.value > 4.0 * inc.noise) pos = true;
      if (inc.value < -4.0 * inc.noise) neg = true;
    }
  }
  if (pos == neg) return std::nullopt;
  return pos ? GapSign::above : GapSign::below;
}

}  // namespace jgb
