#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bccanon {

enum class ErrorCode {
  NotHermitian,
  ConvergenceFailure,
  NotUnitary,
  PartitionMismatch,
  UnsupportedOrder,
  NotSelfAdjoint,
  RankDeficient,
  InvalidTarget,
  OddSize,
  NonFinite,
  ParseError,
  DimensionMismatch,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::NotUnitary: return "NotUnitary";
    case ErrorCode::PartitionMismatch: return "PartitionMismatch";
    case ErrorCode::UnsupportedOrder: return "UnsupportedOrder";
    case ErrorCode::NotSelfAdjoint: return "NotSelfAdjoint";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::InvalidTarget: return "InvalidTarget";
    case ErrorCode::OddSize: return "OddSize";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
  }
  return "Unknown";
}

/// Thrown by every operation in the library. The code is what callers
/// (and the CLI exit-code mapping) dispatch on; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace bccanon
