#pragma once

#include <functional>
#include <span>

namespace jgb {

struct QuadratureOptions {
  /// Initial node budget (GK15 panels of 15 nodes each).
  int nodes = 2048;
  double rel_tol = 1e-12;
  double abs_tol = 1e-15;
  /// Adaptive bisection stops at nodes * max_node_factor evaluations.
  int max_node_factor = 16;
};

struct QuadratureResult {
  double value = 0.0;
  /// Sum of per-panel |K15 - G7| estimates plus any truncated-tail estimate.
  double abs_error = 0.0;
  int nodes = 0;
};

/// Adaptive Gauss-Kronrod (7/15) integration of g over [a, b]; breakpoints
/// inside (a, b) always become panel boundaries.
QuadratureResult integrate(const std::function<double(double)>& g, double a, double b,
                           const QuadratureOptions& opts = {}, std::span<const double> breakpoints = {});

}  // namespace jgb
