#pragma once

#include <vector>

namespace jgb {

/// One term a * |x - mu|^eta of a comparison function t(x).
struct PowerTerm {
  double exponent;
  double coefficient = 1.0;

  bool operator==(const PowerTerm&) const = default;
};

using PowerTerms = std::vector<PowerTerm>;

}  // namespace jgb
