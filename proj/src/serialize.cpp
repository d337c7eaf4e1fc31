#include "jgb/serialize.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "jgb/error.hpp"

namespace jgb::io {

namespace {

[[noreturn]] void bad(const std::string& path, const std::string& what) { reject(path + ": " + what); }

const Json& field(const Json& j, const std::string& path, const char* key) {
  if (!j.is_object()) bad(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) bad(path, std::string("missing field \"") + key + "\"");
  return *it;
}

double real(const Json& j, const std::string& path) {
  if (!j.is_number()) bad(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) bad(path, "expected a finite number");
  return v;
}

double real_field(const Json& j, const std::string& path, const char* key) {
  return real(field(j, path, key), path + "." + key);
}

std::optional<double> opt_real(const Json& j, const std::string& path, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return real(*it, path + "." + key);
}

int integer_field(const Json& j, const std::string& path, const char* key) {
  const Json& v = field(j, path, key);
  if (!v.is_number_integer()) bad(path + "." + key, "expected an integer");
  return v.get<int>();
}

std::string string_field(const Json& j, const std::string& path, const char* key) {
  const Json& v = field(j, path, key);
  if (!v.is_string()) bad(path + "." + key, "expected a string");
  return v.get<std::string>();
}

Eigen::ArrayXd real_array(const Json& j, const std::string& path) {
  if (!j.is_array()) bad(path, "expected an array of numbers");
  Eigen::ArrayXd out(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) out[static_cast<Eigen::Index>(i)] = real(j[i], path + "[" + std::to_string(i) + "]");
  return out;
}

Interval parse_domain(const Json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) bad(path, "expected [lo, hi] with null for an infinite end");
  Interval dom;
  dom.lo = j[0].is_null() ? -inf : real(j[0], path + "[0]");
  dom.hi = j[1].is_null() ? inf : real(j[1], path + "[1]");
  return dom;
}

Json terms_json(const PowerTerms& terms) {
  Json out = Json::array();
  for (const auto& t : terms) out.push_back(Json::array({number(t.exponent), number(t.coefficient)}));
  return out;
}

template <class T>
Json opt_number(const std::optional<T>& v) {
  if (!v) return nullptr;
  if constexpr (std::is_integral_v<T>) {
    return *v;
  } else {
    return number(*v);
  }
}

}  // namespace

Json parse_json(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    reject("malformed JSON in " + what + " at byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

FunctionSpec parse_function(const Json& j, const std::string& path) {
  const std::string k = string_field(j, path, "kind");
  const double mu = real_field(j, path, "mu");
  std::optional<Interval> domain;
  if (auto it = j.find("domain"); it != j.end() && !it->is_null()) domain = parse_domain(*it, path + ".domain");
  const double center = opt_real(j, path, "center").value_or(mu);

  FunctionKind kind;
  if (k == "sin") {
    kind = kind::Sin{};
  } else if (k == "cos") {
    kind = kind::Cos{};
  } else if (k == "log") {
    kind = kind::Log{};
  } else if (k == "sqrt") {
    kind = kind::Sqrt{};
  } else if (k == "pow4") {
    kind = kind::Pow4{};
  } else if (k == "abs_power") {
    kind = kind::AbsPower{real_field(j, path, "alpha"), center};
  } else if (k == "abs_power_sum") {
    kind = kind::AbsPowerSum{real_field(j, path, "alpha"), real_field(j, path, "n"), center};
  } else if (k == "abs_power_min") {
    kind = kind::AbsPowerMin{real_field(j, path, "alpha"), real_field(j, path, "beta"), center};
  } else if (k == "polynomial") {
    const Eigen::ArrayXd c = real_array(field(j, path, "coeffs"), path + ".coeffs");
    kind = kind::Polynomial{std::vector<double>(c.begin(), c.end())};
  } else {
    bad(path + ".kind", "unknown function kind \"" + k + "\"");
  }
  FunctionSpec f = FunctionSpec::builtin(std::move(kind), mu, domain);

  if (auto it = j.find("shift"); it != j.end() && !it->is_null()) {
    if (it->is_string()) {
      if (it->get<std::string>() != "auto") bad(path + ".shift", "expected a number or \"auto\"");
      f = linear_shift(f, select_shift_slope(f));
    } else {
      f = linear_shift(f, real(*it, path + ".shift"));
    }
  }
  return f;
}

DistributionSpec parse_distribution(const Json& j, const std::string& path) {
  const std::string v = string_field(j, path, "variant");
  if (v == "discrete") {
    const Json& pts = field(j, path, "points");
    if (!pts.is_array()) bad(path + ".points", "expected an array of [x, p] pairs");
    std::vector<std::pair<double, double>> out;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const std::string p = path + ".points[" + std::to_string(i) + "]";
      if (!pts[i].is_array() || pts[i].size() != 2) bad(p, "expected an [x, p] pair");
      out.emplace_back(real(pts[i][0], p + "[0]"), real(pts[i][1], p + "[1]"));
    }
    return DistributionSpec::discrete(out);
  }
  if (v == "gaussian") return DistributionSpec::gaussian(real_field(j, path, "mean"), real_field(j, path, "stddev"));
  if (v == "laplace") return DistributionSpec::laplace(real_field(j, path, "mean"), real_field(j, path, "scale"));
  if (v == "uniform") return DistributionSpec::uniform(real_field(j, path, "lo"), real_field(j, path, "hi"));
  if (v == "empirical") return DistributionSpec::empirical(real_array(field(j, path, "samples"), path + ".samples"));
  if (v == "mean_of_n") {
    return DistributionSpec::mean_of_n(parse_distribution(field(j, path, "base"), path + ".base"),
                                       integer_field(j, path, "N"));
  }
  if (v == "two_point") return two_point(real_field(j, path, "mu"), real_field(j, path, "sigma"));
  if (v == "three_point") {
    return three_point(real_field(j, path, "mu"), real_field(j, path, "a"), real_field(j, path, "prob"));
  }
  if (v == "spike") return spike_distribution(integer_field(j, path, "j"), real_field(j, path, "m"));
  bad(path + ".variant", "unknown distribution variant \"" + v + "\"");
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 9);
  return std::string(buf, res.ptr);
}

Json number(double v) {
  if (!std::isfinite(v)) return format_number(v);
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 9);
  double r = 0.0;
  std::from_chars(buf, res.ptr, r);
  return r;
}

Json to_json(const ValidationReport& r) {
  return Json{{"passed", r.passed},
              {"reason", r.reason},
              {"worst_x", number(r.worst_x)},
              {"worst_ratio", number(r.worst_ratio)},
              {"observed_extreme", number(r.observed_extreme)},
              {"probes", r.probes}};
}

Json to_json(const MomentValue& m) {
  return Json{{"p", number(m.p)},
              {"sigma_p", number(m.sigma_p)},
              {"sigma_p_pow", number(m.sigma_p_pow)},
              {"method", to_string(m.method)},
              {"abs_error_estimate", number(m.abs_error_estimate)}};
}

Json to_json(const EnvelopeConstant& m) {
  Json j{{"value", number(m.value)},
         {"role", to_string(m.role)},
         {"arg_tag", to_string(m.tag)},
         {"arg", number(m.arg)},
         {"mu", number(m.mu)},
         {"terms", terms_json(m.terms)},
         {"sign", m.sign == GapSign::above ? "gap_above" : "gap_below"},
         {"validated", m.validated},
         {"function", m.subject},
         {"solver", Json{{"probe_count", m.diag.probe_count},
                         {"refinement_iterations", m.diag.refinement_iterations},
                         {"interval_width", number(m.diag.interval_width)},
                         {"brackets", m.diag.brackets}}}};
  if (m.validation) j["validation"] = to_json(*m.validation);
  return j;
}

Json to_json(const BoundReport& r) {
  Json j{{"kind", to_string(r.kind)}, {"direction", to_string(r.direction)}};
  if (r.direction == BoundDirection::interval) {
    j["lo"] = number(r.lo);
    j["hi"] = number(r.hi);
  } else {
    j["value"] = number(r.value);
  }
  if (r.loose_value) j["loose_value"] = number(*r.loose_value);
  if (r.direction == BoundDirection::signed_lower) j["sign"] = r.sign == GapSign::above ? "gap_above" : "gap_below";
  j["uncertainty"] = number(r.uncertainty);
  j["valid"] = r.valid;
  j["params"] = Json{{"alpha", opt_number(r.params.alpha)}, {"n", opt_number(r.params.n)},
                     {"beta", opt_number(r.params.beta)},   {"k", opt_number(r.params.k)},
                     {"q", opt_number(r.params.q)},         {"p", opt_number(r.params.p)},
                     {"terms", terms_json(r.params.terms)}};
  Json env = Json::array();
  for (const auto& e : r.envelopes) env.push_back(to_json(e));
  j["envelopes"] = env;
  Json mom = Json::array();
  for (const auto& m : r.moments_used) mom.push_back(to_json(m));
  j["moments_used"] = mom;
  j["function"] = r.function_id;
  j["dist"] = r.dist_id;
  return j;
}

Json to_json(const GapEstimate& g) {
  Json j{{"value", number(g.value)}, {"method", to_string(g.method)}, {"abs_error", number(g.abs_error)},
         {"count", g.count}};
  j["seed"] = g.seed ? Json(*g.seed) : Json(nullptr);
  j["function"] = g.function_id;
  j["dist"] = g.dist_id;
  return j;
}

Json to_json(const VerifyResult& v) {
  return Json{{"verdict", to_string(v.verdict)}, {"violation", number(v.violation)}, {"margin", number(v.margin)}};
}

Json to_json(const TwoPointEquality& t) {
  return Json{{"gap", number(t.gap)}, {"bound_floor", number(t.bound_floor)}};
}

Json to_json(const ThreePointBlowup& t) {
  return Json{{"ratio", number(t.ratio)}, {"closed_form", number(t.closed_form)}, {"a", number(t.a)}};
}

Json to_json(const LowerExponentSequence& s) {
  Json rows = Json::array();
  for (const auto& r : s.rows) {
    rows.push_back(Json{{"j", r.j}, {"sigma_q", number(r.sigma_q)}, {"gap", number(r.gap)}, {"ratio", number(r.ratio)}});
  }
  return Json{{"m", number(s.m)},
              {"predicted_slope", number(s.predicted_slope)},
              {"fitted_slope", number(s.fitted_slope)},
              {"decreasing", s.decreasing},
              {"moments_non_increasing", s.moments_non_increasing},
              {"rows", rows}};
}

std::string bound_csv_header() { return "kind,value,lo,hi,loose,uncertainty,M,gap,gap_error,verdict"; }

std::string bound_csv_row(const BoundReport& r, const GapEstimate& g, const VerifyResult& v) {
  std::ostringstream os;
  const bool interval = r.direction == BoundDirection::interval;
  os << to_string(r.kind) << ',' << (interval ? "" : format_number(r.value)) << ','
     << (interval ? format_number(r.lo) : "") << ',' << (interval ? format_number(r.hi) : "") << ','
     << (r.loose_value ? format_number(*r.loose_value) : "") << ',' << format_number(r.uncertainty) << ','
     << (r.envelopes.empty() || interval ? "" : format_number(r.envelopes.front().value)) << ','
     << format_number(g.value) << ',' << format_number(g.abs_error) << ',' << to_string(v.verdict);
  return os.str();
}

}  // namespace jgb::io
