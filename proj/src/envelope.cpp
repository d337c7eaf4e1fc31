#include "jgb/envelope.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "jgb/error.hpp"
#include "ratio.hpp"

namespace jgb {

namespace {

using detail::RatioForm;
using detail::RatioFunction;
using detail::RatioSample;

constexpr int kCoarseProbes = 400;
constexpr double kFarCap = 1e8;
constexpr int kNearProbes = 60;
constexpr int kGoldenIterations = 60;
constexpr std::size_t kTrendWindow = 8;
constexpr double kRelTol = 1e-6;
constexpr double kAbsTol = 1e-14;

struct Candidate {
  double value;
  ArgTag tag;
  double arg;
  double d;
};

struct Scan {
  std::vector<Candidate> candidates;
  std::optional<RatioSample> violation;
  SolverDiagnostics diag;
};

class Optimizer {
 public:
  Optimizer(const RatioFunction& ratio, Extremum mode) : ratio_(ratio), mode_(mode) {}

  bool better(double a, double b) const { return mode_ == Extremum::sup ? a > b : a < b; }
  double worst() const { return mode_ == Extremum::sup ? -inf : inf; }

  Scan run() {
    const FunctionSpec& f = ratio_.function();
    const double mu = f.mu();
    for (double dir : {1.0, -1.0}) {
      const double end = dir > 0 ? f.domain().hi : f.domain().lo;
      const double reach = std::abs(end - mu);
      if (reach == 0.0) continue;
      side(dir, end, reach);
    }
    return std::move(scan_);
  }

 private:
  RatioSample probe(double x) {
    ++scan_.diag.probe_count;
    RatioSample s = ratio_.at(x);
    if (s.sign_violation && !scan_.violation) scan_.violation = s;
    return s;
  }

  void side(double dir, double end, double reach) {
    const double mu = ratio_.function().mu();
    const bool infinite = std::isinf(end);
    auto at = [&](double d) { return d == reach ? end : mu + dir * d; };

    std::vector<RatioSample> all;
    const double span = std::min(reach, kFarCap);
    const double u_max = std::asinh(span);
    for (int j = 1; j <= kCoarseProbes; ++j) {
      const double d = j == kCoarseProbes ? span : std::sinh(u_max * j / kCoarseProbes);
      all.push_back(probe(at(d)));
    }

    std::vector<RatioSample> near;
    const double d0 = 0.5 * std::min(reach, 1.0);
    for (int k = 0; k < kNearProbes; ++k) near.push_back(probe(at(std::ldexp(d0, -k))));
    all.insert(all.end(), near.begin(), near.end());

    std::vector<RatioSample> far;
    if (infinite) {
      for (double d = 2.0; d <= kFarCap; d *= 2.0) far.push_back(probe(at(d)));
      all.insert(all.end(), far.begin(), far.end());
    }

    std::sort(all.begin(), all.end(), [](const RatioSample& a, const RatioSample& b) { return a.d < b.d; });
    std::vector<RatioSample> r;
    for (const auto& s : all) {
      if (!s.reliable) continue;
      if (!r.empty() && r.back().d == s.d) continue;
      r.push_back(s);
    }

    for (const auto& s : r) scan_.candidates.push_back({s.value, ArgTag::point, s.x, s.d});
    for (std::size_t i = 1; i + 1 < r.size(); ++i) {
      const double v = r[i].value, a = r[i - 1].value, b = r[i + 1].value;
      const bool extremum = !better(a, v) && !better(b, v) && (better(v, a) || better(v, b));
      if (extremum) refine(dir, r[i - 1].d, r[i].d, r[i + 1].d);
    }

    limit(near, ArgTag::at_mu, mu, false);
    if (infinite) limit(far, ArgTag::at_infinity, dir * inf, true);
  }

  double value_at(double dir, double d) {
    const RatioSample s = probe(ratio_.function().mu() + dir * d);
    return s.reliable ? s.value : worst();
  }

  void refine(double dir, double lo, double mid, double hi) {
    ++scan_.diag.brackets;
    constexpr double g = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - g * (b - a), e = a + g * (b - a);
    double fc = value_at(dir, c), fe = value_at(dir, e);
    double best_d = mid, best_v = value_at(dir, mid);
    int it = 0;
    for (; it < kGoldenIterations && (b - a) > 1e-12 * b; ++it) {
      if (better(fc, fe) || fc == fe) {
        b = e;
        e = c;
        fe = fc;
        c = b - g * (b - a);
        fc = value_at(dir, c);
      } else {
        a = c;
        c = e;
        fc = fe;
        e = a + g * (b - a);
        fe = value_at(dir, e);
      }
    }
    scan_.diag.refinement_iterations += it;
    scan_.diag.interval_width = std::max(scan_.diag.interval_width, b - a);
    for (auto [d, v] : {std::pair{c, fc}, std::pair{e, fe}}) {
      if (better(v, best_v)) {
        best_v = v;
        best_d = d;
      }
    }
    if (std::isfinite(best_v)) {
      scan_.candidates.push_back({best_v, ArgTag::point, ratio_.function().mu() + dir * best_d, best_d});
    }
  }

  // seq is ordered toward the limit (d -> 0 for at_mu, d -> inf otherwise).
  void limit(const std::vector<RatioSample>& seq, ArgTag tag, double arg, bool outward) {
    std::vector<const RatioSample*> run;
    for (const auto& s : seq) {
      if (s.reliable) {
        run.push_back(&s);
      } else if (!run.empty()) {
        break;
      }
    }
    if (run.size() < 3) return;
    const std::size_t m = run.size();
    const RatioSample& a = *run[m - 3];
    const RatioSample& c = *run[m - 1];
    // Slopes of log|ratio| against log d, signed so positive means growth
    // toward the limit: one over the last three probes, one fitted over a
    // wider tail. Oscillating tails make the short slope erratic and
    // pre-asymptotic probes bias the wide one, so both must agree.
    std::vector<double> tail_d, tail_v;
    for (std::size_t i = m > kTrendWindow ? m - kTrendWindow : 0; i < m; ++i) {
      tail_d.push_back(run[i]->d);
      tail_v.push_back(run[i]->value);
    }
    const double sgn = outward ? 1.0 : -1.0;
    const double short_trend = sgn * detail::loglog_slope(a.d, a.value, c.d, c.value);
    const double wide_trend = sgn * detail::loglog_fit(tail_d, tail_v);
    const double trend = (short_trend > 0) == (wide_trend > 0)
                             ? (std::abs(short_trend) < std::abs(wide_trend) ? short_trend : wide_trend)
                             : 0.0;
    const bool same_sign = (a.value > 0) == (c.value > 0);
    double value;
    if (trend > detail::kTrendSlope && same_sign && std::abs(c.value) > std::abs(a.value)) {
      value = c.value > 0 ? inf : -inf;
      tag = ArgTag::unbounded;
    } else if (trend < -detail::kTrendSlope && std::abs(c.value) < std::abs(a.value)) {
      value = 0.0;
    } else {
      value = detail::aitken_limit(a.value, run[m - 2]->value, c.value);
      if (m >= 5) {
        const double a0 = detail::aitken_limit(run[m - 5]->value, run[m - 4]->value, a.value);
        const double a1 = detail::aitken_limit(run[m - 4]->value, a.value, run[m - 2]->value);
        value = detail::aitken_limit(a0, a1, value);
      }
    }
    scan_.candidates.push_back({value, tag, arg, outward ? inf : 0.0});
  }

  const RatioFunction& ratio_;
  Extremum mode_;
  Scan scan_;
};

int priority(const Candidate& c) {
  switch (c.tag) {
    case ArgTag::at_mu: return 0;
    case ArgTag::at_infinity: return 1;
    default: return 2;
  }
}

EnvelopeConstant optimize(const FunctionSpec& f, const PowerTerms& terms, RatioForm form, Extremum mode,
                          GapSign sign, EnvelopeRole role, std::optional<RatioSample>* violation = nullptr) {
  const RatioFunction ratio(f, terms, form, sign);
  Optimizer opt(ratio, mode);
  Scan scan = opt.run();
  if (violation) *violation = scan.violation;

  EnvelopeConstant out;
  out.role = role;
  out.mu = f.mu();
  out.terms = terms;
  out.sign = sign;
  out.subject = f.identity();
  out.diag = scan.diag;
  if (scan.candidates.empty()) {
    throw Error(ErrorCode::convergence_failure, "no probe of the ratio escaped rounding noise");
  }

  const Candidate* best = &scan.candidates.front();
  for (const auto& c : scan.candidates) {
    if (opt.better(c.value, best->value)) best = &c;
  }
  if (std::isinf(best->value)) {
    out.value = best->value;
    out.tag = ArgTag::unbounded;
    out.arg = best->arg;
    return out;
  }
  const double tol = kRelTol * std::abs(best->value) + kAbsTol;
  const Candidate* pick = nullptr;
  for (const auto& c : scan.candidates) {
    if (std::abs(c.value - best->value) > tol || std::isinf(c.value)) continue;
    if (!pick || priority(c) < priority(*pick) || (priority(c) == priority(*pick) && c.d < pick->d)) pick = &c;
  }
  out.value = best->value;
  out.tag = pick->tag;
  out.arg = pick->arg;
  return out;
}

PowerTerms merged(double a, double b) {
  if (a == b) return {{a, 2.0}};
  return {{a, 1.0}, {b, 1.0}};
}

}  // namespace

const char* to_string(EnvelopeRole r) noexcept {
  switch (r) {
    case EnvelopeRole::upper_sup: return "upper_sup";
    case EnvelopeRole::lower_inf: return "lower_inf";
    case EnvelopeRole::h_sup: return "h_sup";
    case EnvelopeRole::h_inf: return "h_inf";
    case EnvelopeRole::general_sup: return "general_sup";
    case EnvelopeRole::general_inf: return "general_inf";
  }
  return "unknown";
}

const char* to_string(ArgTag t) noexcept {
  switch (t) {
    case ArgTag::point: return "point";
    case ArgTag::at_mu: return "at_mu";
    case ArgTag::at_infinity: return "at_infinity";
    case ArgTag::unbounded: return "unbounded";
  }
  return "unknown";
}

void check_terms(const PowerTerms& terms) {
  if (terms.empty()) reject("comparison terms must be non-empty");
  std::set<double> seen;
  for (const auto& t : terms) {
    if (!std::isfinite(t.exponent) || t.exponent < 0.0) reject("term exponents must be finite and >= 0");
    if (!(t.coefficient > 0.0) || !std::isfinite(t.coefficient)) reject("term coefficients must be positive");
    if (!seen.insert(t.exponent).second) reject("term exponents must be distinct");
  }
}

EnvelopeConstant sup_ratio_general(const FunctionSpec& f, const PowerTerms& terms, Extremum mode, GapSign sign) {
  check_terms(terms);
  if (mode == Extremum::sup) {
    EnvelopeConstant m = optimize(f, terms, RatioForm::upper, mode, sign, EnvelopeRole::general_sup);
    if (m.tag == ArgTag::unbounded) {
      throw Error(ErrorCode::unbounded_envelope,
                  m.arg == f.mu() ? "ratio diverges as x -> mu" : "ratio diverges as |x| -> inf");
    }
    m.validated = true;
    return m;
  }
  std::optional<RatioSample> violation;
  EnvelopeConstant m = optimize(f, terms, RatioForm::lower, mode, sign, EnvelopeRole::general_inf, &violation);
  if (violation) {
    throw Error(ErrorCode::condition_violation,
                std::string("f(x) - f(mu) has the wrong sign for gap ") +
                    (sign == GapSign::above ? "above" : "below") + " at x = " + std::to_string(violation->x),
                violation->value);
  }
  if (!(m.value > 0.0)) {
    throw Error(ErrorCode::degenerate_envelope, "infimum of the lower ratio is indistinguishable from 0", m.value);
  }
  m.validated = true;
  return m;
}

EnvelopeConstant sup_ratio_upper(const FunctionSpec& f, double alpha, double n) {
  const GrowthDeclaration g{alpha, n, std::nullopt, GapSign::above};
  const ValidationReport report = validate_growth(f, g, GrowthRole::upper);
  if (!report.passed) {
    throw Error(ErrorCode::unbounded_envelope, "upper growth conditions fail: " + report.reason, report.worst_ratio);
  }
  EnvelopeConstant m = sup_ratio_general(f, merged(alpha, n), Extremum::sup);
  m.role = EnvelopeRole::upper_sup;
  m.validation = report;
  return m;
}

EnvelopeConstant inf_ratio_lower(const FunctionSpec& f, double alpha, double beta, GapSign sign) {
  const GrowthDeclaration g{alpha, std::nullopt, beta, sign};
  g.check();
  EnvelopeConstant m = sup_ratio_general(f, merged(beta, alpha), Extremum::inf, sign);
  const ValidationReport report = validate_growth(f, g, GrowthRole::lower);
  if (!report.passed) {
    throw Error(ErrorCode::degenerate_envelope, "lower growth conditions fail: " + report.reason, report.worst_ratio);
  }
  m.role = EnvelopeRole::lower_inf;
  m.validation = report;
  return m;
}

HEnvelope h_envelope(const FunctionSpec& f) {
  const FunctionSpec g = linear_shift(f, select_shift_slope(f));
  HEnvelope out{optimize(g, {}, RatioForm::curvature, Extremum::inf, GapSign::above, EnvelopeRole::h_inf),
                optimize(g, {}, RatioForm::curvature, Extremum::sup, GapSign::above, EnvelopeRole::h_sup)};
  out.inf.validated = out.sup.validated = true;
  return out;
}

}  // namespace jgb
