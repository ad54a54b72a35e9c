#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace quadlag {

enum class ErrorCode {
  DimensionMismatch,
  NotASublattice,
  SingularTransform,
  DegenerateSystem,
  Unbounded,
  NonGenericPresentation,
  NotFullRank,
  WrongQuadricCount,
  NotAPolygon,
  RankDeficient,
  ConvergenceFailure,
  CutTooDeep,
  MalformedRecipe,
  ExhaustedAttempts,
  ParseError,
  SchemaError,
  Internal,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
  case ErrorCode::DimensionMismatch: return "DimensionMismatch";
  case ErrorCode::NotASublattice: return "NotASublattice";
  case ErrorCode::SingularTransform: return "SingularTransform";
  case ErrorCode::DegenerateSystem: return "DegenerateSystem";
  case ErrorCode::Unbounded: return "Unbounded";
  case ErrorCode::NonGenericPresentation: return "NonGenericPresentation";
  case ErrorCode::NotFullRank: return "NotFullRank";
  case ErrorCode::WrongQuadricCount: return "WrongQuadricCount";
  case ErrorCode::NotAPolygon: return "NotAPolygon";
  case ErrorCode::RankDeficient: return "RankDeficient";
  case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
  case ErrorCode::CutTooDeep: return "CutTooDeep";
  case ErrorCode::MalformedRecipe: return "MalformedRecipe";
  case ErrorCode::ExhaustedAttempts: return "ExhaustedAttempts";
  case ErrorCode::ParseError: return "ParseError";
  case ErrorCode::SchemaError: return "SchemaError";
  case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so
/// callers (and the CLI exit-code mapping) can dispatch on it.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string &what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

} // namespace quadlag
