#pragma once

// Randomized (function, distribution, bound) combinations from the builtin
// families, each checked against the gap oracle.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "cli.hpp"
#include "jgb/error.hpp"
#include "jgb/oracle.hpp"

namespace sandwich {

using namespace jgb;

enum class Domain { real_line, log_domain, sqrt_domain };

struct Family {
  std::string name;
  Domain domain;
};

struct Combo {
  std::string label;
  FunctionSpec f;
  DistributionSpec d;
  cli::BoundRequest req;
};

struct Stats {
  int combos = 0;
  int reports = 0;
  int pass = 0;
  int fail = 0;
  int inconclusive = 0;
  int skipped = 0;
  std::vector<std::string> failures;
  std::vector<std::string> skips;
};

class Generator {
 public:
  explicit Generator(std::uint64_t seed) : rng_(seed) {}

  double unif(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng_); }
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

  /// A distribution whose support sits inside the domain, centred near c.
  DistributionSpec distribution(Domain dom, std::string& label) {
    const double lo = dom == Domain::log_domain ? 0.5 : dom == Domain::sqrt_domain ? 0.0 : -inf;
    const double c = dom == Domain::real_line ? unif(-2.0, 2.0) : lo + unif(0.3, 3.0);
    const double room = std::isfinite(lo) ? c - lo : 5.0;
    const int variants = dom == Domain::real_line ? 8 : 6;
    switch (pick(variants)) {
      case 0: {
        const int n = 2 + pick(5);
        std::vector<std::pair<double, double>> pts;
        double total = 0;
        for (int i = 0; i < n; ++i) {
          const double w = unif(0.05, 1.0);
          pts.emplace_back(c + unif(-0.95, 0.95) * room * 0.999, w);
          total += w;
        }
        std::sort(pts.begin(), pts.end());
        pts.erase(std::unique(pts.begin(), pts.end(), [](auto& a, auto& b) { return a.first == b.first; }), pts.end());
        total = 0;
        for (auto& p : pts) total += p.second;
        for (auto& p : pts) p.second /= total;
        label = "discrete" + std::to_string(pts.size());
        return DistributionSpec::discrete(pts);
      }
      case 1:
        label = "two_point";
        return two_point(c, unif(0.05, 0.95) * room);
      case 2:
        label = "three_point";
        return three_point(c, unif(0.05, 0.95) * room, unif(0.01, 0.9));
      case 3: {
        label = "uniform";
        const double w = unif(0.05, 0.95) * room;
        return DistributionSpec::uniform(c - w, c + w);
      }
      case 4: {
        label = "empirical";
        Eigen::ArrayXd s(40);
        for (int i = 0; i < 40; ++i) s[i] = c + unif(-0.9, 0.9) * room;
        return DistributionSpec::empirical(s);
      }
      case 5: {
        label = "mean_of_n";
        const double w = unif(0.1, 0.95) * room;
        return mean_of_n(DistributionSpec::uniform(c - w, c + w), 2 + pick(7));
      }
      case 6:
        label = "gaussian";
        return DistributionSpec::gaussian(c, unif(0.1, 1.5));
      default:
        label = "laplace";
        return DistributionSpec::laplace(c, unif(0.1, 1.0));
    }
  }

  std::vector<Combo> combos(int count) {
    const std::vector<Family> families{{"sin", Domain::real_line},        {"cos", Domain::real_line},
                                       {"log", Domain::log_domain},       {"sqrt", Domain::sqrt_domain},
                                       {"pow4", Domain::real_line},       {"abs_power_sum", Domain::real_line}};
    std::vector<Combo> out;
    while (static_cast<int>(out.size()) < count) {
      const Family& fam = families[pick(static_cast<int>(families.size()))];
      std::string dlabel;
      const DistributionSpec d = distribution(fam.domain, dlabel);
      const double mu = mean(d);
      cli::BoundRequest req;
      std::optional<FunctionSpec> f;
      bool shift = true;
      if (fam.name == "sin" || fam.name == "cos") {
        f = fam.name == "sin" ? FunctionSpec::sin(mu) : FunctionSpec::cos(mu);
        const char* kinds[] = {"upper", "upper_linear", "variance", "general_upper"};
        req.kind = kinds[pick(4)];
        req.alpha = 2;
        req.n = pick(2) ? 2.0 : 3.0;
        if (req.kind == "upper_linear") {
          req.kind = "upper";
          req.alpha = 1;
          req.n = 1;
          shift = false;
        } else if (req.kind == "general_upper") {
          req.terms = {{2.0, unif(0.2, 2.0)}, {3.0, unif(0.2, 2.0)}};
        }
      } else if (fam.name == "log" || fam.name == "sqrt") {
        f = fam.name == "log" ? FunctionSpec::log(mu, Interval::at_least(0.5)) : FunctionSpec::sqrt(mu);
        const char* kinds[] = {"upper", "lower", "holder", "holder_balanced", "variance", "general_lower"};
        req.kind = kinds[pick(6)];
        req.alpha = 2;
        req.n = 2;
        req.beta = 1;
        req.k = 1 + pick(4);
        req.sign = GapSign::below;
        if (req.kind == "general_lower") req.terms = {{1.0, unif(0.2, 2.0)}, {2.0, unif(0.2, 2.0)}};
      } else if (fam.name == "pow4") {
        f = FunctionSpec::pow4(mu);
        const char* kinds[] = {"upper", "lower", "holder", "holder_balanced", "variance", "general_upper",
                               "general_lower"};
        req.kind = kinds[pick(7)];
        req.alpha = 2;
        req.n = 4;
        req.beta = pick(2) ? 1.0 : 2.0;
        req.k = 1 + pick(4);
        req.sign = GapSign::above;
        if (req.kind == "general_upper") req.terms = {{2.0, unif(0.2, 2.0)}, {4.0, unif(0.2, 2.0)}};
        if (req.kind == "general_lower") req.terms = {{1.0, unif(0.2, 2.0)}, {2.0, unif(0.2, 2.0)}};
      } else {
        const double a = unif(0.5, 2.0), n = a + unif(0.0, 2.0);
        f = FunctionSpec::abs_power_sum(a, n, mu);
        shift = false;
        const char* kinds[] = {"upper", "lower", "holder", "holder_balanced", "general_upper"};
        req.kind = kinds[pick(5)];
        if (req.kind == "upper" || req.kind == "general_upper") {
          req.alpha = a;
          req.n = n;
        } else {
          req.alpha = n;
          req.beta = a;
        }
        req.k = 1 + pick(4);
        req.sign = GapSign::above;
      }
      FunctionSpec g = shift ? linear_shift(*f, select_shift_slope(*f)) : *f;
      out.push_back({fam.name + "/" + dlabel + "/" + req.kind, g, d, req});
    }
    return out;
  }

 private:
  std::mt19937_64 rng_;
};

/// Expected failures (a family that cannot satisfy the requested envelope at
/// this mean) are counted as skips with their error code.
inline Stats run(const std::vector<Combo>& combos, std::int64_t samples, std::uint64_t seed) {
  Stats s;
  Budget budget;
  budget.samples = samples;
  MomentOptions mopts;
  mopts.seed = seed;
  mopts.mc_samples = samples;
  for (const auto& c : combos) {
    ++s.combos;
    try {
      const GapEstimate gap = jensen_gap(c.f, c.d, budget, seed);
      for (const auto& o : cli::compute_bounds(c.f, c.d, c.req, mopts, gap)) {
        ++s.reports;
        switch (o.verdict.verdict) {
          case Verdict::pass: ++s.pass; break;
          case Verdict::inconclusive: ++s.inconclusive; break;
          case Verdict::fail:
            ++s.fail;
            s.failures.push_back(c.label + " " + c.d.identity() + " violation " + std::to_string(o.verdict.violation));
            break;
        }
      }
    } catch (const Error& e) {
      ++s.skipped;
      s.skips.push_back(c.label + " " + c.d.identity() + ": " + to_string(e.code()) + " " + e.what());
    }
  }
  return s;
}

}  // namespace sandwich
