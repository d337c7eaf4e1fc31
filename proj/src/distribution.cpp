#include "jgb/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <numbers>
#include <sstream>

#include "jgb/error.hpp"
#include "jgb/function.hpp"
#include "jgb/summation.hpp"

namespace jgb {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) reject(std::string(what) + " must be finite");
}

double draw(const DistributionSpec& d, CounterRng& rng);

double draw_variant(const DistributionSpec::Variant& v, CounterRng& rng) {
  return std::visit(overloaded{
                        [&](const dist::Discrete& x) {
                          const double u = rng.uniform();
                          const auto* begin = x.cdf.data();
                          const auto* end = begin + x.cdf.size();
                          auto it = std::upper_bound(begin, end, u);
                          if (it == end) --it;
                          return x.points[it - begin];
                        },
                        [&](const dist::Gaussian& x) { return x.mean + x.stddev * rng.normal(); },
                        [&](const dist::Laplace& x) {
                          const double u = rng.uniform() - 0.5;
                          const double s = u < 0 ? -1.0 : 1.0;
                          return x.mean - x.scale * s * std::log1p(-2.0 * std::abs(u));
                        },
                        [&](const dist::Uniform& x) { return x.lo + (x.hi - x.lo) * rng.uniform(); },
                        [&](const dist::Empirical& x) {
                          const auto n = static_cast<double>(x.samples.size());
                          auto idx = static_cast<Eigen::Index>(rng.uniform() * n);
                          idx = std::min<Eigen::Index>(idx, x.samples.size() - 1);
                          return x.samples[idx];
                        },
                        [&](const dist::MeanOfN& x) {
                          double s = 0.0;
                          for (int i = 0; i < x.n; ++i) s += draw(*x.base, rng);
                          return s / x.n;
                        },
                    },
                    v);
}

double draw(const DistributionSpec& d, CounterRng& rng) { return draw_variant(d.variant(), rng); }

double gaussian_abs_moment(double sd, double p) {
  return std::pow(sd, p) * std::pow(2.0, 0.5 * p) * std::tgamma(0.5 * (p + 1.0)) / std::sqrt(std::numbers::pi);
}

MomentValue finish(double p, double power, MomentMethod method, double err) {
  MomentValue m;
  m.p = p;
  m.sigma_p_pow = power;
  m.sigma_p = p == 0.0 ? 1.0 : std::pow(power, 1.0 / p);
  m.method = method;
  m.abs_error_estimate = err;
  return m;
}

}  // namespace

const char* to_string(MomentMethod m) noexcept {
  switch (m) {
    case MomentMethod::exact_sum: return "exact_sum";
    case MomentMethod::closed_form: return "closed_form";
    case MomentMethod::quadrature: return "quadrature";
    case MomentMethod::monte_carlo: return "monte_carlo";
  }
  return "unknown";
}

DistributionSpec DistributionSpec::discrete(const std::vector<std::pair<double, double>>& points) {
  Eigen::ArrayXd x(static_cast<Eigen::Index>(points.size()));
  Eigen::ArrayXd p(x.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    x[static_cast<Eigen::Index>(i)] = points[i].first;
    p[static_cast<Eigen::Index>(i)] = points[i].second;
  }
  return discrete(std::move(x), std::move(p));
}

DistributionSpec DistributionSpec::discrete(Eigen::ArrayXd points, Eigen::ArrayXd probs) {
  if (points.size() == 0 || points.size() != probs.size()) {
    reject("discrete distribution needs matching, non-empty point and probability lists");
  }
  if (!points.allFinite() || !probs.allFinite()) reject("discrete support and probabilities must be finite");
  if ((probs <= 0.0).any()) reject("discrete probabilities must be positive");
  ExactSum total;
  for (double q : probs) total.add(q);
  if (std::abs(total.value() - 1.0) > 1e-12) reject("discrete probabilities must sum to 1 (got " + num(total.value()) + ")");
  std::vector<double> sorted(points.begin(), points.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) reject("discrete support points must be distinct");

  Eigen::ArrayXd cdf(probs.size());
  double acc = 0.0;
  for (Eigen::Index i = 0; i < probs.size(); ++i) cdf[i] = (acc += probs[i]);
  return DistributionSpec(dist::Discrete{std::move(points), std::move(probs), std::move(cdf)});
}

DistributionSpec DistributionSpec::gaussian(double mean, double stddev) {
  require_finite(mean, "gaussian mean");
  if (!(stddev > 0.0) || !std::isfinite(stddev)) reject("gaussian stddev must be positive");
  return DistributionSpec(dist::Gaussian{mean, stddev});
}

DistributionSpec DistributionSpec::laplace(double mean, double scale) {
  require_finite(mean, "laplace mean");
  if (!(scale > 0.0) || !std::isfinite(scale)) reject("laplace scale must be positive");
  return DistributionSpec(dist::Laplace{mean, scale});
}

DistributionSpec DistributionSpec::uniform(double lo, double hi) {
  require_finite(lo, "uniform lo");
  require_finite(hi, "uniform hi");
  if (!(lo < hi)) reject("uniform needs lo < hi");
  return DistributionSpec(dist::Uniform{lo, hi});
}

DistributionSpec DistributionSpec::empirical(Eigen::ArrayXd samples) {
  if (samples.size() == 0) reject("empirical distribution needs at least one sample");
  if (!samples.allFinite()) reject("empirical samples must be finite");
  return DistributionSpec(dist::Empirical{std::move(samples)});
}

DistributionSpec DistributionSpec::mean_of_n(const DistributionSpec& base, int n) {
  if (n < 1) reject("mean_of_n needs N >= 1");
  return DistributionSpec(dist::MeanOfN{std::make_shared<const DistributionSpec>(base), n});
}

std::pair<double, double> DistributionSpec::support_hull() const {
  return std::visit(overloaded{
                        [](const dist::Discrete& x) { return std::pair{x.points.minCoeff(), x.points.maxCoeff()}; },
                        [](const dist::Gaussian&) { return std::pair{-inf, inf}; },
                        [](const dist::Laplace&) { return std::pair{-inf, inf}; },
                        [](const dist::Uniform& x) { return std::pair{x.lo, x.hi}; },
                        [](const dist::Empirical& x) { return std::pair{x.samples.minCoeff(), x.samples.maxCoeff()}; },
                        [](const dist::MeanOfN& x) { return x.base->support_hull(); },
                    },
                    v_);
}

std::string DistributionSpec::identity() const {
  std::ostringstream os;
  std::visit(overloaded{
                 [&](const dist::Discrete& x) {
                   os << "discrete{";
                   for (Eigen::Index i = 0; i < x.points.size(); ++i) {
                     os << (i ? "," : "") << num(x.points[i]) << ":" << num(x.probs[i]);
                   }
                   os << "}";
                 },
                 [&](const dist::Gaussian& x) { os << "gaussian(" << num(x.mean) << "," << num(x.stddev) << ")"; },
                 [&](const dist::Laplace& x) { os << "laplace(" << num(x.mean) << "," << num(x.scale) << ")"; },
                 [&](const dist::Uniform& x) { os << "uniform(" << num(x.lo) << "," << num(x.hi) << ")"; },
                 [&](const dist::Empirical& x) {
                   // Hash of the sample bits keeps the identity short.
                   std::uint64_t h = 0;
                   for (double s : x.samples) {
                     std::uint64_t bits;
                     std::memcpy(&bits, &s, sizeof bits);
                     h = CounterRng::mix64(h ^ bits);
                   }
                   os << "empirical(n=" << x.samples.size() << ",h=" << std::hex << h << std::dec << ")";
                 },
                 [&](const dist::MeanOfN& x) { os << "mean_of_n(" << x.base->identity() << "," << x.n << ")"; },
             },
             v_);
  return os.str();
}

double mean(const DistributionSpec& d) {
  return std::visit(overloaded{
                        [](const dist::Discrete& x) {
                          ExactSum s;
                          for (Eigen::Index i = 0; i < x.points.size(); ++i) s.add(x.probs[i] * x.points[i]);
                          return s.value();
                        },
                        [](const dist::Gaussian& x) { return x.mean; },
                        [](const dist::Laplace& x) { return x.mean; },
                        [](const dist::Uniform& x) { return 0.5 * (x.lo + x.hi); },
                        [](const dist::Empirical& x) {
                          ExactSum s;
                          for (double v : x.samples) s.add(v);
                          return s.value() / static_cast<double>(x.samples.size());
                        },
                        [](const dist::MeanOfN& x) { return mean(*x.base); },
                    },
                    d.variant());
}

QuadratureResult continuous_expectation(const DistributionSpec& d, const std::function<double(double)>& g,
                                        const QuadratureOptions& opts) {
  const double mu = mean(d);
  const double bp[] = {mu};
  if (const auto* u = d.as<dist::Uniform>()) {
    const double density = 1.0 / (u->hi - u->lo);
    return integrate([&](double x) { return g(x) * density; }, u->lo, u->hi, opts, bp);
  }

  std::function<double(double)> density;
  double width = 0.0;
  double k = 0.0;
  if (const auto* n = d.as<dist::Gaussian>()) {
    density = [n](double x) {
      const double z = (x - n->mean) / n->stddev;
      return std::exp(-0.5 * z * z) / (n->stddev * std::sqrt(2.0 * std::numbers::pi));
    };
    width = n->stddev;
    k = 10.0;
  } else if (const auto* l = d.as<dist::Laplace>()) {
    density = [l](double x) { return std::exp(-std::abs(x - l->mean) / l->scale) / (2.0 * l->scale); };
    width = l->scale;
    k = 40.0;
  } else {
    reject("continuous_expectation needs a gaussian, laplace or uniform distribution");
  }

  auto integrand = [&](double x) { return g(x) * density(x); };
  QuadratureResult core = integrate(integrand, mu - k * width, mu + k * width, opts, bp);
  // Grow the window until the next shell is negligible; the last shell's
  // magnitude is the tail estimate.
  QuadratureOptions shell_opts = opts;
  shell_opts.nodes = std::max(240, opts.nodes / 8);
  for (int grow = 0; grow < 6; ++grow) {
    const QuadratureResult right = integrate(integrand, mu + k * width, mu + 2 * k * width, shell_opts);
    const QuadratureResult left = integrate(integrand, mu - 2 * k * width, mu - k * width, shell_opts);
    core.value += right.value + left.value;
    core.abs_error += right.abs_error + left.abs_error;
    core.nodes += right.nodes + left.nodes;
    const double shell = std::abs(right.value) + std::abs(left.value);
    if (!std::isfinite(core.value) || !std::isfinite(shell)) break;
    k *= 2.0;
    if (shell <= std::max(opts.abs_tol, opts.rel_tol * std::abs(core.value))) {
      core.abs_error += shell;
      return core;
    }
  }
  throw Error(ErrorCode::unsupported, "expectation tail does not decay; moment or gap may be infinite");
}

void for_each_draw(const DistributionSpec& d, std::int64_t count, std::uint64_t seed, StreamPurpose purpose,
                   const std::function<void(double)>& sink) {
  const std::int64_t batches = (count + detail::kMonteCarloBatch - 1) / detail::kMonteCarloBatch;
  for (std::int64_t b = 0; b < batches; ++b) {
    CounterRng rng(seed, purpose, static_cast<std::uint64_t>(b));
    const std::int64_t len = std::min(detail::kMonteCarloBatch, count - b * detail::kMonteCarloBatch);
    for (std::int64_t i = 0; i < len; ++i) sink(draw(d, rng));
  }
}

MomentValue abs_central_moment(const DistributionSpec& d, double p, const MomentOptions& opts) {
  if (!(p >= 0.0) || !std::isfinite(p)) reject("moment order p must be finite and >= 0");
  if (p == 0.0) return finish(0.0, 1.0, d.is_finite_support() ? MomentMethod::exact_sum : MomentMethod::closed_form, 0.0);
  const double mu = mean(d);

  if (const auto* x = d.as<dist::Discrete>()) {
    const double power = (x->probs * (x->points - mu).abs().pow(p)).sum();
    return finish(p, power, MomentMethod::exact_sum, 0.0);
  }
  if (const auto* x = d.as<dist::Empirical>()) {
    const double power = (x->samples - mu).abs().pow(p).mean();
    return finish(p, power, MomentMethod::exact_sum, 0.0);
  }
  if (const auto* x = d.as<dist::MeanOfN>()) {
    if (opts.mc_samples < 2) reject("Monte Carlo moments need at least 2 samples");
    // Welford accumulation per batch, merged in batch order.
    double m = 0.0, s2 = 0.0;
    std::int64_t n = 0;
    for_each_draw(d, opts.mc_samples, opts.seed, StreamPurpose::moment, [&](double v) {
      const double y = std::pow(std::abs(v - mu), p);
      ++n;
      const double delta = y - m;
      m += delta / static_cast<double>(n);
      s2 += delta * (y - m);
    });
    (void)x;
    const double sd = std::sqrt(s2 / static_cast<double>(n - 1));
    return finish(p, m, MomentMethod::monte_carlo, 1.96 * sd / std::sqrt(static_cast<double>(n)));
  }

  if (opts.prefer_quadrature) {
    const auto r = continuous_expectation(d, [&](double t) { return std::pow(std::abs(t - mu), p); }, opts.quadrature);
    return finish(p, r.value, MomentMethod::quadrature, r.abs_error);
  }
  if (const auto* x = d.as<dist::Gaussian>()) {
    return finish(p, gaussian_abs_moment(x->stddev, p), MomentMethod::closed_form, 0.0);
  }
  if (const auto* x = d.as<dist::Laplace>()) {
    return finish(p, std::pow(x->scale, p) * std::tgamma(p + 1.0), MomentMethod::closed_form, 0.0);
  }
  const auto* u = d.as<dist::Uniform>();
  const double half = 0.5 * (u->hi - u->lo);
  return finish(p, std::pow(half, p) / (p + 1.0), MomentMethod::closed_form, 0.0);
}

Eigen::ArrayXd sample(const DistributionSpec& d, std::int64_t count, std::uint64_t seed) {
  if (count < 1) reject("sample count must be >= 1");
  Eigen::ArrayXd out(count);
  Eigen::Index i = 0;
  for_each_draw(d, count, seed, StreamPurpose::sample, [&](double v) { out[i++] = v; });
  return out;
}

DistributionSpec two_point(double mu, double sigma) {
  require_finite(mu, "two_point mu");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) reject("two_point sigma must be positive");
  return DistributionSpec::discrete({{mu - sigma, 0.5}, {mu + sigma, 0.5}});
}

DistributionSpec three_point(double mu, double a, double prob) {
  require_finite(mu, "three_point mu");
  if (!(a > 0.0) || !std::isfinite(a)) reject("three_point offset a must be positive");
  if (!(prob > 0.0 && prob < 1.0)) reject("three_point prob must lie in (0, 1)");
  return DistributionSpec::discrete({{mu - a, 0.5 * prob}, {mu, 1.0 - prob}, {mu + a, 0.5 * prob}});
}

DistributionSpec spike_distribution(int j, double m) {
  if (j < 1) reject("spike distribution needs j >= 1");
  if (!(m > 0.0) || !std::isfinite(m)) reject("spike distribution needs m > 0");
  const double tail = std::pow(static_cast<double>(j), -m);
  const double centre = 1.0 - tail;
  if (centre < 0.0) reject("spike distribution mass at 0 would be negative");
  const double jd = static_cast<double>(j);
  if (centre == 0.0) return DistributionSpec::discrete({{-jd, 0.5}, {jd, 0.5}});
  return DistributionSpec::discrete({{-jd, 0.5 * tail}, {0.0, centre}, {jd, 0.5 * tail}});
}

DistributionSpec mean_of_n(const DistributionSpec& base, int n) { return DistributionSpec::mean_of_n(base, n); }

}  // namespace jgb
