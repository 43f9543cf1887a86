#pragma once

#include <stdexcept>
#include <string>

namespace seriation {

enum class ErrorCode {
  validation,
  empty_input,
  degenerate_support,
  domain_mismatch,
  antisymmetry,
  schedule_degenerate,
  infeasible,
  sealed_oracle,
  no_triples,
  io,
  all_cells_failed,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::validation: return "validation";
    case ErrorCode::empty_input: return "empty_input";
    case ErrorCode::degenerate_support: return "degenerate_support";
    case ErrorCode::domain_mismatch: return "domain_mismatch";
    case ErrorCode::antisymmetry: return "antisymmetry";
    case ErrorCode::schedule_degenerate: return "schedule_degenerate";
    case ErrorCode::infeasible: return "infeasible";
    case ErrorCode::sealed_oracle: return "sealed_oracle";
    case ErrorCode::no_triples: return "no_triples";
    case ErrorCode::io: return "io";
    case ErrorCode::all_cells_failed: return "all_cells_failed";
  }
  return "unknown";
}

/// Every failure raised by the library carries a machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline void require(bool condition, ErrorCode code, const std::string& what) {
  if (!condition) throw Error(code, what);
}

}  // namespace seriation
