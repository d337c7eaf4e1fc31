#pragma once

#include <optional>
#include <string>

#include "jgb/function.hpp"
#include "jgb/terms.hpp"

namespace jgb {

enum class EnvelopeRole { upper_sup, lower_inf, h_sup, h_inf, general_sup, general_inf };

/// Where the extremum sits: an attained point, one of the two limits, or
/// nowhere finite (value is +-inf).
enum class ArgTag { point, at_mu, at_infinity, unbounded };

enum class Extremum { sup, inf };

const char* to_string(EnvelopeRole r) noexcept;
const char* to_string(ArgTag t) noexcept;

struct SolverDiagnostics {
  int probe_count = 0;
  int refinement_iterations = 0;
  /// Widest final golden-section bracket, in |x - mu|.
  double interval_width = 0.0;
  int brackets = 0;
};

/// Distribution-free constant M with the location of the extremum.
struct EnvelopeConstant {
  double value = 0.0;
  ArgTag tag = ArgTag::point;
  /// x of the extremum; mu for at_mu, +-inf for at_infinity.
  double arg = 0.0;
  EnvelopeRole role = EnvelopeRole::general_sup;
  double mu = 0.0;
  /// Comparison terms the ratio was taken against (empty for h).
  PowerTerms terms;
  GapSign sign = GapSign::above;
  bool validated = false;
  std::optional<ValidationReport> validation;
  /// FunctionSpec::identity() of the function the ratio was built from.
  std::string subject;
  SolverDiagnostics diag;
};

/// sup |f(x) - f(mu)| / (|x - mu|^alpha + |x - mu|^n) over the domain minus mu.
/// Throws Error(unbounded_envelope) when the growth check or the optimizer
/// sees the ratio diverge.
EnvelopeConstant sup_ratio_upper(const FunctionSpec& f, double alpha, double n);

/// inf s (f(x) - f(mu)) (|x - mu|^-beta + |x - mu|^-alpha), s = +1 for
/// GapSign::above and -1 for below. Throws Error(condition_violation) on a
/// sign violation and Error(degenerate_envelope) when the infimum is 0.
EnvelopeConstant inf_ratio_lower(const FunctionSpec& f, double alpha, double beta, GapSign sign);

struct HEnvelope {
  EnvelopeConstant inf;
  EnvelopeConstant sup;
};

/// inf and sup of h(x) = (f(x) - f(mu) - f'(mu)(x - mu)) / (x - mu)^2.
/// Divergence is reported with ArgTag::unbounded, not thrown.
HEnvelope h_envelope(const FunctionSpec& f);

/// sup mode: sup |f - f(mu)| / sum a |x - mu|^eta.
/// inf mode: inf s (f - f(mu)) sum a |x - mu|^-eta.
/// Exponents must be distinct, finite and >= 0; coefficients positive.
EnvelopeConstant sup_ratio_general(const FunctionSpec& f, const PowerTerms& terms, Extremum mode,
                                   GapSign sign = GapSign::above);

/// Throws Error(rejected_input) unless the terms are usable.
void check_terms(const PowerTerms& terms);

}  // namespace jgb
