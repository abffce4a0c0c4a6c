#pragma once

#include <stdexcept>
#include <string>

namespace convcert {

// Failure categories shared across the library. The CLI maps these onto
// process exit codes, so the set is part of the external contract.
enum class ErrorCode {
  NonFinite,
  NotSymmetric,
  Singular,
  DomainViolation,
  DimensionMismatch,
  InvalidK,
  InvalidIndex,
  InvalidM,
  InvalidSpec,
  NoOffDiagonal,
  SearchExhausted,
  NoWitness,
  WrongFamily,
  ParseError,
};

inline const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonFinite: return "non_finite";
    case ErrorCode::NotSymmetric: return "not_symmetric";
    case ErrorCode::Singular: return "singular";
    case ErrorCode::DomainViolation: return "domain_violation";
    case ErrorCode::DimensionMismatch: return "dimension_mismatch";
    case ErrorCode::InvalidK: return "invalid_k";
    case ErrorCode::InvalidIndex: return "invalid_index";
    case ErrorCode::InvalidM: return "invalid_m";
    case ErrorCode::InvalidSpec: return "invalid_spec";
    case ErrorCode::NoOffDiagonal: return "no_off_diagonal";
    case ErrorCode::SearchExhausted: return "search_exhausted";
    case ErrorCode::NoWitness: return "no_witness";
    case ErrorCode::WrongFamily: return "wrong_family";
    case ErrorCode::ParseError: return "parse_error";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace convcert
