#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace germ {

// Stable identifiers; the CLI serializes these verbatim.
enum class ErrorCode {
  structural,
  degenerate,
  not_isolated,
  instability,
  leakage,
  region,
  incomplete_census,
  heuristic_failure,
  hypothesis,
  non_diagonal,
  small_divisor,
  syntax,
  dimension_mismatch,
  nonzero_constant,
  usage,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::structural: return "structural";
    case ErrorCode::degenerate: return "degenerate";
    case ErrorCode::not_isolated: return "not_isolated";
    case ErrorCode::instability: return "instability";
    case ErrorCode::leakage: return "leakage";
    case ErrorCode::region: return "region";
    case ErrorCode::incomplete_census: return "incomplete_census";
    case ErrorCode::heuristic_failure: return "heuristic_failure";
    case ErrorCode::hypothesis: return "hypothesis";
    case ErrorCode::non_diagonal: return "non_diagonal";
    case ErrorCode::small_divisor: return "small_divisor";
    case ErrorCode::syntax: return "syntax";
    case ErrorCode::dimension_mismatch: return "dimension_mismatch";
    case ErrorCode::nonzero_constant: return "nonzero_constant";
    case ErrorCode::usage: return "usage";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace germ
