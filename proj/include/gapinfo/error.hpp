#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gapinfo {

enum class ErrorCode {
  NegativeEntry,
  NotNormalized,
  ShapeMismatch,
  SameVariable,
  NonPositiveConcentration,
  EmptyInput,
  InvalidDistribution,
  OutOfRange,
  EpsilonOutOfRange,
  BadRange,
  VerificationFailed,
  NoFeasiblePoint,
  TooLarge,
  InvalidConfig,
  ParseError,
  ValidationError,
  WrongOrder,
  IoError,
  TooFewRows,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NegativeEntry: return "NegativeEntry";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::SameVariable: return "SameVariable";
    case ErrorCode::NonPositiveConcentration: return "NonPositiveConcentration";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::InvalidDistribution: return "InvalidDistribution";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::EpsilonOutOfRange: return "EpsilonOutOfRange";
    case ErrorCode::BadRange: return "BadRange";
    case ErrorCode::VerificationFailed: return "VerificationFailed";
    case ErrorCode::NoFeasiblePoint: return "NoFeasiblePoint";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::WrongOrder: return "WrongOrder";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::TooFewRows: return "TooFewRows";
  }
  return "Unknown";
}

/// Every failure in the library is reported as an Error carrying a code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace gapinfo
