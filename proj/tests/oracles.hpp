#pragma once

// Brute-force references built without the library's numerics: long double
// sums, dense grids and composite Simpson rules.

#include <cmath>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

namespace oracle {

using Points = std::vector<std::pair<double, double>>;  // (x, p)

inline long double mean(const Points& pts) {
  long double m = 0;
  for (auto [x, p] : pts) m += static_cast<long double>(p) * x;
  return m;
}

inline double gap(const std::function<long double(long double)>& f, const Points& pts) {
  long double e = 0;
  for (auto [x, p] : pts) e += static_cast<long double>(p) * f(x);
  return static_cast<double>(e - f(mean(pts)));
}

/// E|X - mu|^p with |t|^0 = 1.
inline double moment_pow(const Points& pts, double p) {
  const long double m = mean(pts);
  long double e = 0;
  for (auto [x, w] : pts) e += static_cast<long double>(w) * (p == 0.0 ? 1.0L : std::pow(std::fabs(x - m), (long double)p));
  return static_cast<double>(e);
}

/// Composite Simpson on [a, b] with n (even) panels.
inline double simpson(const std::function<double(double)>& g, double a, double b, int n = 200000) {
  const long double h = (static_cast<long double>(b) - a) / n;
  long double s = g(a) + g(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0L : 2.0L) * g(static_cast<double>(a + i * h));
  return static_cast<double>(s * h / 3.0L);
}

/// E g(X) for a density symmetric about m, integrated over x = m +- u^2 so a
/// cusp of g at m becomes smooth.
inline double symmetric_expectation(const std::function<double(double)>& g,
                                    const std::function<double(double)>& density, double m, double reach) {
  return simpson(
      [&](double u) {
        const double t = u * u;
        return (g(m + t) + g(m - t)) * density(t) * 2 * u;
      },
      0.0, std::sqrt(reach));
}

inline double gaussian_expectation(const std::function<double(double)>& g, double m, double s) {
  const double pi = 3.14159265358979323846;
  return symmetric_expectation(
      g, [&](double t) { return std::exp(-0.5 * t * t / (s * s)) / (s * std::sqrt(2 * pi)); }, m, 14 * s);
}

inline double laplace_expectation(const std::function<double(double)>& g, double m, double b) {
  return symmetric_expectation(g, [&](double t) { return std::exp(-t / b) / (2 * b); }, m, 60 * b);
}

/// max over a dense symmetric log grid of ratio(mu + s * 10^e), e in [lo, hi].
inline double grid_sup(const std::function<double(double)>& ratio, double mu, double lo_exp, double hi_exp,
                       double reach_left = INFINITY, double reach_right = INFINITY, int per_side = 200000) {
  double best = -INFINITY;
  for (int side = -1; side <= 1; side += 2) {
    const double reach = side < 0 ? reach_left : reach_right;
    for (int i = 0; i <= per_side; ++i) {
      const double d = std::pow(10.0, lo_exp + (hi_exp - lo_exp) * i / per_side);
      if (d > reach) break;
      best = std::max(best, ratio(mu + side * d));
    }
    if (std::isfinite(reach)) best = std::max(best, ratio(mu + side * reach));
  }
  return best;
}

inline double grid_inf(const std::function<double(double)>& ratio, double mu, double lo_exp, double hi_exp,
                       double reach_left = INFINITY, double reach_right = INFINITY) {
  return -grid_sup([&](double x) { return -ratio(x); }, mu, lo_exp, hi_exp, reach_left, reach_right);
}

/// Pascal's triangle.
inline std::uint64_t binomial(int n, int k) {
  std::vector<std::uint64_t> row(n + 1, 0);
  row[0] = 1;
  for (int i = 1; i <= n; ++i)
    for (int j = i; j >= 1; --j) row[j] += row[j - 1];
  return row[k];
}

}  // namespace oracle
