#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nilcert {

enum class ErrorCode {
  DimensionMismatch,
  NotASublattice,
  NotASubgroup,
  NotNormal,
  NotAbelianQuotient,
  QuotientTooLarge,
  UnsupportedShape,
  NotFiniteIndex,
  ClosureViolation,
  NotAnAutomorphism,
  InfiniteOrder,
  InvalidParameters,
  IllDefinedAction,
  TooLarge,
  EnumerationFailed,
  ZeroEuler,
  UnsupportedGroupShape,
  UnresolvableReference,
  ParseError,
};

constexpr std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotASublattice: return "NotASublattice";
    case ErrorCode::NotASubgroup: return "NotASubgroup";
    case ErrorCode::NotNormal: return "NotNormal";
    case ErrorCode::NotAbelianQuotient: return "NotAbelianQuotient";
    case ErrorCode::QuotientTooLarge: return "QuotientTooLarge";
    case ErrorCode::UnsupportedShape: return "UnsupportedShape";
    case ErrorCode::NotFiniteIndex: return "NotFiniteIndex";
    case ErrorCode::ClosureViolation: return "ClosureViolation";
    case ErrorCode::NotAnAutomorphism: return "NotAnAutomorphism";
    case ErrorCode::InfiniteOrder: return "InfiniteOrder";
    case ErrorCode::InvalidParameters: return "InvalidParameters";
    case ErrorCode::IllDefinedAction: return "IllDefinedAction";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::EnumerationFailed: return "EnumerationFailed";
    case ErrorCode::ZeroEuler: return "ZeroEuler";
    case ErrorCode::UnsupportedGroupShape: return "UnsupportedGroupShape";
    case ErrorCode::UnresolvableReference: return "UnresolvableReference";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// Domain error raised by every module; the CLI maps it to exit status 1.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }
  [[nodiscard]] std::string_view name() const noexcept {
    return error_name(code_);
  }

 private:
  ErrorCode code_;
};

}  // namespace nilcert
