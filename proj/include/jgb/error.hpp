#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace jgb {

enum class ErrorCode {
  rejected_input,
  domain_error,
  evaluation_error,
  convergence_failure,
  unbounded_envelope,
  condition_violation,
  degenerate_envelope,
  unsupported,
};

const char* to_string(ErrorCode code) noexcept;

/// Every failure raised by the library. `residual` carries a diagnostic
/// magnitude where one exists (finite-difference residual, violating ratio).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what, std::optional<double> residual = std::nullopt)
      : std::runtime_error(what), code_(code), residual_(residual) {}

  ErrorCode code() const noexcept { return code_; }
  std::optional<double> residual() const noexcept { return residual_; }

 private:
  ErrorCode code_;
  std::optional<double> residual_;
};

inline const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::rejected_input: return "rejected_input";
    case ErrorCode::domain_error: return "domain_error";
    case ErrorCode::evaluation_error: return "evaluation_error";
    case ErrorCode::convergence_failure: return "convergence_failure";
    case ErrorCode::unbounded_envelope: return "unbounded_envelope";
    case ErrorCode::condition_violation: return "condition_violation";
    case ErrorCode::degenerate_envelope: return "degenerate_envelope";
    case ErrorCode::unsupported: return "unsupported";
  }
  return "unknown";
}

[[noreturn]] inline void reject(const std::string& what) { throw Error(ErrorCode::rejected_input, what); }

}  // namespace jgb
