#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rankrange {

enum class ErrorCode {
  NotUnitary,
  EigensolveFailed,
  EmptySpectrum,
  InvalidRank,
  TooLarge,
  EmptyRegion,
  NoConvexSolution,
  DegenerateDenominator,
  BothHeavy,
  NoSolution,
  UnsupportedDimension,
  LambdaOutsideRegion,
  GramFailure,
  ShapeMismatch,
  ParseError,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotUnitary: return "NotUnitary";
    case ErrorCode::EigensolveFailed: return "EigensolveFailed";
    case ErrorCode::EmptySpectrum: return "EmptySpectrum";
    case ErrorCode::InvalidRank: return "InvalidRank";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::EmptyRegion: return "EmptyRegion";
    case ErrorCode::NoConvexSolution: return "NoConvexSolution";
    case ErrorCode::DegenerateDenominator: return "DegenerateDenominator";
    case ErrorCode::BothHeavy: return "BothHeavy";
    case ErrorCode::NoSolution: return "NoSolution";
    case ErrorCode::UnsupportedDimension: return "UnsupportedDimension";
    case ErrorCode::LambdaOutsideRegion: return "LambdaOutsideRegion";
    case ErrorCode::GramFailure: return "GramFailure";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// Exception carrying a machine-readable error code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Process exit status for an error: 1 usage/parse, 2 mathematical rejection,
/// 3 internal invariant failure.
constexpr int exit_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError:
    case ErrorCode::ShapeMismatch:
    case ErrorCode::InvalidRank:
    case ErrorCode::TooLarge:
      return 1;
    case ErrorCode::NotUnitary:
    case ErrorCode::EmptySpectrum:
    case ErrorCode::LambdaOutsideRegion:
    case ErrorCode::UnsupportedDimension:
    case ErrorCode::EmptyRegion:
    case ErrorCode::NoConvexSolution:
      return 2;
    default:
      return 3;
  }
}

}  // namespace rankrange
