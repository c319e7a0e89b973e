#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qwt {

enum class ErrorCode {
  UnknownOperator,
  UnboundVariable,
  ArityMismatch,
  DuplicateName,
  BudgetExceeded,
  ProbeExceeded,
  StaleClass,
  StaleProof,
  FiberMismatch,
  CoherenceFailure,
  InvalidArgument,
  Json,
};

inline std::string_view to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::UnknownOperator: return "UnknownOperator";
    case ErrorCode::UnboundVariable: return "UnboundVariable";
    case ErrorCode::ArityMismatch: return "ArityMismatch";
    case ErrorCode::DuplicateName: return "DuplicateName";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::ProbeExceeded: return "ProbeExceeded";
    case ErrorCode::StaleClass: return "StaleClass";
    case ErrorCode::StaleProof: return "StaleProof";
    case ErrorCode::FiberMismatch: return "FiberMismatch";
    case ErrorCode::CoherenceFailure: return "CoherenceFailure";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Json: return "Json";
  }
  return "?";
}

/// Error raised by the term, equation, engine and initiality layers.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace qwt
