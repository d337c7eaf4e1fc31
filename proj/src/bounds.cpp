#include "jgb/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "jgb/error.hpp"

namespace jgb {

namespace {

constexpr int kMaxBinomial = 60;

class MomentCache {
 public:
  MomentCache(const DistributionSpec& d, const MomentOptions& opts) : d_(d), opts_(opts) {}

  const MomentValue& at(double p) {
    auto it = cache_.find(p);
    if (it == cache_.end()) {
      it = cache_.emplace(p, abs_central_moment(d_, p, opts_)).first;
      order_.push_back(p);
    }
    return it->second;
  }
  double pow(double p) { return at(p).sigma_p_pow; }
  double err(double p) { return at(p).abs_error_estimate; }

  std::vector<MomentValue> used() const {
    std::vector<MomentValue> out;
    for (double p : order_) out.push_back(cache_.at(p));
    return out;
  }

 private:
  const DistributionSpec& d_;
  const MomentOptions& opts_;
  std::map<double, MomentValue> cache_;
  std::vector<double> order_;
};

void check_mean(double mu, const DistributionSpec& d) {
  const double m = mean(d);
  if (std::abs(m - mu) > 1e-9 * std::max(1.0, std::abs(mu))) {
    reject("distribution mean " + std::to_string(m) + " does not match the function anchor mu = " +
           std::to_string(mu));
  }
}

void check_envelope(const EnvelopeConstant& m, std::initializer_list<EnvelopeRole> roles, const PowerTerms& terms) {
  if (std::find(roles.begin(), roles.end(), m.role) == roles.end()) {
    reject(std::string("envelope of role ") + to_string(m.role) + " cannot be used for this bound");
  }
  auto sorted = [](PowerTerms t) {
    std::sort(t.begin(), t.end(), [](const PowerTerm& a, const PowerTerm& b) { return a.exponent < b.exponent; });
    return t;
  };
  if (sorted(m.terms) != sorted(terms)) reject("envelope was computed for different exponents");
  if (!std::isfinite(m.value)) reject("envelope constant is not finite");
}

PowerTerms pair_terms(double a, double b) {
  if (a == b) return {{a, 2.0}};
  return {{a, 1.0}, {b, 1.0}};
}

BoundReport start(BoundKind kind, BoundDirection dir, const EnvelopeConstant& m, const DistributionSpec& d) {
  BoundReport r;
  r.kind = kind;
  r.direction = dir;
  r.sign = m.sign;
  r.envelopes = {m};
  r.valid = m.validated;
  r.function_id = m.subject;
  r.dist_id = d.identity();
  return r;
}

void check_lower_exponents(double alpha, double beta) {
  GrowthDeclaration{alpha, std::nullopt, beta, GapSign::above}.check();
}

// M A^p / B^(p/q) with its first-order uncertainty.
std::pair<double, double> holder_combine(double m, double a, double ea, double b, double eb, double p, double q) {
  const double value = m * std::pow(a, p) / std::pow(b, p / q);
  double unc;
  if (a > 0.0) {
    unc = value * (p * ea / a + (p / q) * eb / b);
  } else {
    unc = m * std::pow(ea, p) / std::pow(b, p / q);
  }
  return {value, unc};
}

}  // namespace

const char* to_string(BoundKind k) noexcept {
  switch (k) {
    case BoundKind::upper_two_form: return "upper_two_form";
    case BoundKind::lower_cauchy_schwarz: return "lower_cauchy_schwarz";
    case BoundKind::lower_holder: return "lower_holder";
    case BoundKind::lower_holder_balanced: return "lower_holder_balanced";
    case BoundKind::variance_interval: return "variance_interval";
    case BoundKind::general_upper: return "general_upper";
    case BoundKind::general_lower: return "general_lower";
  }
  return "unknown";
}

const char* to_string(BoundDirection d) noexcept {
  switch (d) {
    case BoundDirection::abs_upper: return "abs_upper";
    case BoundDirection::signed_lower: return "signed_lower";
    case BoundDirection::interval: return "interval";
  }
  return "unknown";
}

std::uint64_t binomial(int n, int k) {
  if (n < 0 || n > kMaxBinomial) reject("binomial coefficients are exact only for 0 <= n <= 60");
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t c = 1;
  // C(60, 30) * 30 < 2^64, so the running product never overflows.
  for (int i = 0; i < k; ++i) c = c * static_cast<std::uint64_t>(n - i) / static_cast<std::uint64_t>(i + 1);
  return c;
}

std::vector<int> holder_q_choices(int k) {
  if (k < 1) reject("Hoelder parameter k must be >= 1");
  std::vector<int> out;
  for (int q = 2; q <= k + 1; ++q) {
    if ((k + 1) % q == 0) out.push_back(q);
  }
  return out;
}

BoundReport upper_bound_two_form(const EnvelopeConstant& m, const DistributionSpec& d, double alpha, double n,
                                 const MomentOptions& opts) {
  GrowthDeclaration{alpha, n, std::nullopt, GapSign::above}.check();
  check_envelope(m, {EnvelopeRole::upper_sup, EnvelopeRole::general_sup}, pair_terms(alpha, n));
  check_mean(m.mu, d);
  BoundReport r = start(BoundKind::upper_two_form, BoundDirection::abs_upper, m, d);
  r.params.alpha = alpha;
  r.params.n = n;
  r.params.terms = m.terms;
  MomentCache mc(d, opts);
  const double sa = mc.pow(alpha), sn = mc.pow(n);
  r.value = m.value * (sa + sn);
  const MomentValue& mn = mc.at(n);
  r.loose_value = m.value * (1.0 + std::pow(mn.sigma_p, n - alpha)) * std::pow(mn.sigma_p, alpha);
  r.uncertainty = m.value * (mc.err(alpha) + mc.err(n));
  r.moments_used = mc.used();
  return r;
}

BoundReport lower_bound_cauchy_schwarz(const EnvelopeConstant& m, const DistributionSpec& d, double alpha,
                                       double beta, const MomentOptions& opts) {
  check_lower_exponents(alpha, beta);
  check_envelope(m, {EnvelopeRole::lower_inf, EnvelopeRole::general_inf}, pair_terms(beta, alpha));
  check_mean(m.mu, d);
  BoundReport r = start(BoundKind::lower_cauchy_schwarz, BoundDirection::signed_lower, m, d);
  r.params.alpha = alpha;
  r.params.beta = beta;
  r.params.terms = m.terms;
  MomentCache mc(d, opts);
  const double half = mc.pow(alpha / 2.0);
  const double den = 1.0 + mc.pow(alpha - beta);
  const double num = half * half;
  r.value = m.value * num / den;
  r.uncertainty = m.value * (2.0 * half * mc.err(alpha / 2.0) / den + num * mc.err(alpha - beta) / (den * den));
  r.moments_used = mc.used();
  return r;
}

BoundReport lower_bound_holder(const EnvelopeConstant& m, const DistributionSpec& d, double alpha, double beta, int k,
                               int q, const MomentOptions& opts) {
  check_lower_exponents(alpha, beta);
  if (k < 1) reject("Hoelder parameter k must be >= 1");
  if (k > kMaxBinomial) reject("Hoelder parameter k must be <= 60");
  if (q < 2 || (k + 1) % q != 0) {
    reject("q = " + std::to_string(q) + " must be a factor of k + 1 = " + std::to_string(k + 1) + " other than 1");
  }
  check_envelope(m, {EnvelopeRole::lower_inf, EnvelopeRole::general_inf}, pair_terms(beta, alpha));
  check_mean(m.mu, d);
  BoundReport r = start(BoundKind::lower_holder, BoundDirection::signed_lower, m, d);
  const double p = static_cast<double>(q) / (q - 1);
  r.params.alpha = alpha;
  r.params.beta = beta;
  r.params.k = k;
  r.params.q = q;
  r.params.p = p;
  r.params.terms = m.terms;

  MomentCache mc(d, opts);
  const int rr = (k + 1) / q - 1;
  double a = 0.0, ea = 0.0;
  for (int l = 0; l <= rr; ++l) {
    const double e = alpha / p + l * (alpha - beta);
    const double c = static_cast<double>(binomial(rr, l));
    a += c * mc.pow(e);
    ea += c * mc.err(e);
  }
  double b = 0.0, eb = 0.0;
  for (int l = 0; l <= k; ++l) {
    const double e = l * (alpha - beta);
    const double c = static_cast<double>(binomial(k, l));
    b += c * mc.pow(e);
    eb += c * mc.err(e);
  }
  std::tie(r.value, r.uncertainty) = holder_combine(m.value, a, ea, b, eb, p, q);
  r.moments_used = mc.used();
  return r;
}

BoundReport lower_bound_holder_balanced(const EnvelopeConstant& m, const DistributionSpec& d, double alpha,
                                        double beta, int k, const MomentOptions& opts) {
  check_lower_exponents(alpha, beta);
  if (k < 1) reject("Hoelder parameter k must be >= 1");
  if (k > kMaxBinomial) reject("Hoelder parameter k must be <= 60");
  check_envelope(m, {EnvelopeRole::lower_inf, EnvelopeRole::general_inf}, pair_terms(beta, alpha));
  check_mean(m.mu, d);
  BoundReport r = start(BoundKind::lower_holder_balanced, BoundDirection::signed_lower, m, d);
  const double p = 1.0 + 1.0 / k;
  r.params.alpha = alpha;
  r.params.beta = beta;
  r.params.k = k;
  r.params.q = k + 1;
  r.params.p = p;
  r.params.terms = m.terms;

  MomentCache mc(d, opts);
  const double e_num = alpha / p;
  const double a = mc.pow(e_num);
  double b = 0.0, eb = 0.0;
  for (int l = 0; l <= k; ++l) {
    const double e = l * (alpha - beta);
    const double c = static_cast<double>(binomial(k, l));
    b += c * mc.pow(e);
    eb += c * mc.err(e);
  }
  // sigma_{alpha/p}^alpha = (sigma_{alpha/p}^{alpha/p})^p
  r.value = m.value * std::pow(a, p) / std::pow(b, 1.0 / k);
  r.uncertainty =
      a > 0.0 ? r.value * (p * mc.err(e_num) / a + eb / (k * b)) : m.value * std::pow(mc.err(e_num), p);
  r.moments_used = mc.used();
  return r;
}

BoundReport variance_interval(const FunctionSpec& f, const DistributionSpec& d, const MomentOptions& opts) {
  check_mean(f.mu(), d);
  return variance_interval(h_envelope(f), d, opts);
}

BoundReport variance_interval(const HEnvelope& h, const DistributionSpec& d, const MomentOptions& opts) {
  check_mean(h.inf.mu, d);
  BoundReport r;
  r.kind = BoundKind::variance_interval;
  r.direction = BoundDirection::interval;
  r.envelopes = {h.inf, h.sup};
  r.valid = h.inf.validated && h.sup.validated;
  r.function_id = h.inf.subject;
  r.dist_id = d.identity();
  r.params.alpha = 2.0;
  r.params.n = 2.0;
  MomentCache mc(d, opts);
  const double var = mc.pow(2.0);
  auto scaled = [var](double hv) { return var == 0.0 ? 0.0 : hv * var; };
  r.lo = scaled(h.inf.value);
  r.hi = scaled(h.sup.value);
  r.value = r.hi;
  const double hmax = std::max(std::isfinite(h.inf.value) ? std::abs(h.inf.value) : 0.0,
                               std::isfinite(h.sup.value) ? std::abs(h.sup.value) : 0.0);
  r.uncertainty = hmax * mc.err(2.0);
  r.moments_used = mc.used();
  return r;
}

BoundReport general_bounds(const FunctionSpec& f, const DistributionSpec& d, const PowerTerms& terms, BoundMode mode,
                           std::optional<int> k, GapSign sign, const MomentOptions& opts) {
  check_terms(terms);
  check_mean(f.mu(), d);
  const EnvelopeConstant m = sup_ratio_general(f, terms, mode == BoundMode::upper ? Extremum::sup : Extremum::inf, sign);
  return general_bounds(m, d, mode, k, opts);
}

BoundReport general_bounds(const EnvelopeConstant& m, const DistributionSpec& d, BoundMode mode, std::optional<int> k,
                           const MomentOptions& opts) {
  check_terms(m.terms);
  check_mean(m.mu, d);
  MomentCache mc(d, opts);
  if (mode == BoundMode::upper) {
    if (k) reject("k applies to general lower bounds only");
    check_envelope(m, {EnvelopeRole::general_sup, EnvelopeRole::upper_sup}, m.terms);
    BoundReport r = start(BoundKind::general_upper, BoundDirection::abs_upper, m, d);
    r.params.terms = m.terms;
    double s = 0.0, e = 0.0;
    for (const auto& t : m.terms) {
      s += t.coefficient * mc.pow(t.exponent);
      e += t.coefficient * mc.err(t.exponent);
    }
    r.value = m.value * s;
    r.uncertainty = m.value * e;
    r.moments_used = mc.used();
    return r;
  }

  check_envelope(m, {EnvelopeRole::general_inf, EnvelopeRole::lower_inf}, m.terms);
  const int kk = k.value_or(1);
  if (kk < 1 || kk > kMaxBinomial) reject("general lower bound needs 1 <= k <= 60");
  BoundReport r = start(BoundKind::general_lower, BoundDirection::signed_lower, m, d);
  double alpha = 0.0;
  for (const auto& t : m.terms) alpha = std::max(alpha, t.exponent);
  r.params.alpha = alpha;
  r.params.terms = m.terms;
  if (k) r.params.k = kk;

  // (sum a_eta y^(alpha - eta))^k expanded into exponent -> coefficient.
  std::map<double, double> base;
  for (const auto& t : m.terms) base[alpha - t.exponent] += t.coefficient;
  std::map<double, double> power{{0.0, 1.0}};
  for (int i = 0; i < kk; ++i) {
    std::map<double, double> next;
    for (const auto& [ea, ca] : power) {
      for (const auto& [eb, cb] : base) next[ea + eb] += ca * cb;
    }
    power = std::move(next);
  }
  double b = 0.0, eb = 0.0;
  for (const auto& [e, c] : power) {
    b += c * mc.pow(e);
    eb += c * mc.err(e);
  }
  const double p = 1.0 + 1.0 / kk;
  const double e_num = alpha / p;
  const double a = mc.pow(e_num);
  r.params.p = p;
  std::tie(r.value, r.uncertainty) = holder_combine(m.value, a, mc.err(e_num), b, eb, p, kk + 1.0);
  r.moments_used = mc.used();
  return r;
}

}  // namespace jgb
