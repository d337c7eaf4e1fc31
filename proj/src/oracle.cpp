#include "jgb/oracle.hpp"

#include <cmath>

#include "jgb/error.hpp"
#include "jgb/summation.hpp"

namespace jgb {

namespace {

void check_support(const FunctionSpec& f, const DistributionSpec& d, double m) {
  const auto [lo, hi] = d.support_hull();
  const Interval& dom = f.domain();
  if (lo < dom.lo || hi > dom.hi) {
    throw Error(ErrorCode::domain_error, "support of " + d.identity() + " escapes the domain of " + f.identity());
  }
  if (!dom.contains(m)) throw Error(ErrorCode::domain_error, "mean of the distribution lies outside the domain");
}

GapEstimate weighted_exact(const FunctionSpec& f, const Eigen::ArrayXd& xs, const Eigen::ArrayXd* probs, double m) {
  ExactSum s;
  const double w = 1.0 / static_cast<double>(xs.size());
  for (Eigen::Index i = 0; i < xs.size(); ++i) s.add((probs ? (*probs)[i] : w) * f(xs[i]));
  s.add(-f(m));
  GapEstimate g;
  g.value = s.value();
  g.method = GapMethod::exact_sum;
  g.count = xs.size();
  return g;
}

}  // namespace

const char* to_string(GapMethod m) noexcept {
  switch (m) {
    case GapMethod::exact_sum: return "exact_sum";
    case GapMethod::quadrature: return "quadrature";
    case GapMethod::monte_carlo: return "monte_carlo";
  }
  return "unknown";
}

const char* to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "unknown";
}

GapEstimate jensen_gap(const FunctionSpec& f, const DistributionSpec& d, const Budget& budget,
                       std::optional<std::uint64_t> seed) {
  const double m = mean(d);
  check_support(f, d, m);
  GapEstimate g;
  if (const auto* x = d.as<dist::Discrete>()) {
    g = weighted_exact(f, x->points, &x->probs, m);
  } else if (const auto* x = d.as<dist::Empirical>()) {
    // Equal weights: sum exactly, then divide once.
    ExactSum s;
    for (double v : x->samples) s.add(f(v));
    const double n = static_cast<double>(x->samples.size());
    ExactSum t;
    t.add(s.value() / n);
    t.add(-f(m));
    g.value = t.value();
    g.method = GapMethod::exact_sum;
    g.count = x->samples.size();
  } else if (d.as<dist::MeanOfN>()) {
    if (budget.samples < 2) reject("Monte Carlo gap needs at least 2 samples");
    const double fm = f(m);
    double mean_acc = 0.0, s2 = 0.0;
    std::int64_t n = 0;
    for_each_draw(d, budget.samples, seed.value_or(0), StreamPurpose::oracle, [&](double v) {
      const double y = f(v) - fm;
      ++n;
      const double delta = y - mean_acc;
      mean_acc += delta / static_cast<double>(n);
      s2 += delta * (y - mean_acc);
    });
    g.value = mean_acc;
    g.method = GapMethod::monte_carlo;
    g.abs_error = 1.96 * std::sqrt(s2 / static_cast<double>(n - 1)) / std::sqrt(static_cast<double>(n));
    g.count = n;
    g.seed = seed.value_or(0);
  } else {
    QuadratureOptions q;
    q.nodes = budget.nodes;
    const double fm = f(m);
    const QuadratureResult r = continuous_expectation(d, [&](double x) { return f(x) - fm; }, q);
    g.value = r.value;
    g.method = GapMethod::quadrature;
    g.abs_error = r.abs_error;
    g.count = r.nodes;
  }
  g.function_id = f.identity();
  g.dist_id = d.identity();
  return g;
}

VerifyResult verify(const BoundReport& report, const GapEstimate& gap) {
  if (report.function_id != gap.function_id || report.dist_id != gap.dist_id) {
    reject("bound report and gap estimate describe different (f, dist): [" + report.function_id + " | " +
           report.dist_id + "] vs [" + gap.function_id + " | " + gap.dist_id + "]");
  }
  const double e = gap.abs_error;
  const double u = report.uncertainty;
  const double tol = kVerifySlack;
  VerifyResult out;
  auto classify = [&](bool certain_ok, bool certain_bad, double margin) {
    out.margin = margin;
    if (certain_ok) {
      out.verdict = Verdict::pass;
    } else if (certain_bad) {
      out.verdict = Verdict::fail;
      out.violation = -margin;
    } else {
      out.verdict = Verdict::inconclusive;
    }
  };

  switch (report.direction) {
    case BoundDirection::abs_upper: {
      const double j = std::abs(gap.value);
      const double ub = report.value;
      classify(j + e <= ub - u + tol, j - e > ub + u + tol, ub - j);
      break;
    }
    case BoundDirection::signed_lower: {
      const double sj = sign_factor(report.sign) * gap.value;
      const double lb = report.value;
      classify(sj - e >= lb + u - tol, sj + e < lb - u - tol, sj - lb);
      break;
    }
    case BoundDirection::interval: {
      const double j = gap.value;
      const bool ok = j - e >= report.lo + u - tol && j + e <= report.hi - u + tol;
      const bool bad = j + e < report.lo - u - tol || j - e > report.hi + u + tol;
      classify(ok, bad, std::min(j - report.lo, report.hi - j));
      break;
    }
  }
  return out;
}

}  // namespace jgb
