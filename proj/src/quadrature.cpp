#include "jgb/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <vector>

#include "jgb/error.hpp"

namespace jgb {

namespace {

// Kronrod 15-point abscissae and weights, embedded Gauss 7-point weights.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851, 0.864864423359769072789712788640926,
    0.741531185599394439863864773280788, 0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204, 0.104790010322250183839876322541518,
    0.140653259715525918745189590510238, 0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                       0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

Panel gk15(const std::function<double(double)>& g, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = g(center);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double f1 = g(center - dx);
    const double f2 = g(center + dx);
    kronrod += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
  }
  return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& g, double a, double b, const QuadratureOptions& opts,
                           std::span<const double> breakpoints) {
  if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) reject("quadrature needs a finite interval a < b");
  std::vector<double> cuts{a};
  for (double c : breakpoints) {
    if (c > a && c < b) cuts.push_back(c);
  }
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  const int total_panels = std::max<int>(static_cast<int>(cuts.size()) - 1, opts.nodes / 15);
  std::priority_queue<Panel> heap;
  int nodes = 0;
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    const double len = cuts[s + 1] - cuts[s];
    const int panels = std::max(1, static_cast<int>(std::lround(total_panels * len / (b - a))));
    for (int i = 0; i < panels; ++i) {
      const double lo = cuts[s] + len * i / panels;
      const double hi = i + 1 == panels ? cuts[s + 1] : cuts[s] + len * (i + 1) / panels;
      heap.push(gk15(g, lo, hi));
      nodes += 15;
    }
  }

  auto totals = [&heap] {
    // Sum in a fixed order (sorted by left endpoint) for reproducibility.
    std::vector<Panel> all;
    auto copy = heap;
    while (!copy.empty()) {
      all.push_back(copy.top());
      copy.pop();
    }
    std::sort(all.begin(), all.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
    double v = 0.0, e = 0.0;
    for (const auto& p : all) {
      v += p.value;
      e += p.error;
    }
    return std::pair{v, e};
  };

  const int cap = opts.nodes * opts.max_node_factor;
  double value = 0.0, error = 0.0;
  std::tie(value, error) = totals();
  // Bisect the worst panels in rounds, re-summing after each round.
  while (error > std::max(opts.abs_tol, opts.rel_tol * std::abs(value)) && nodes + 30 <= cap) {
    const int round = std::max<int>(1, static_cast<int>(heap.size() / 8));
    for (int r = 0; r < round && nodes + 30 <= cap; ++r) {
      const Panel worst = heap.top();
      heap.pop();
      const double mid = 0.5 * (worst.a + worst.b);
      heap.push(gk15(g, worst.a, mid));
      heap.push(gk15(g, mid, worst.b));
      nodes += 30;
    }
    std::tie(value, error) = totals();
  }
  return {value, error, nodes};
}

}  // namespace jgb
