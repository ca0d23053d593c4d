#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace linattn {

enum class ErrorCode {
  EmptyDataset,
  RankInfeasible,
  BadSpectrum,
  UnsupportedFormat,
  ParseError,
  LabelOutOfRange,
  DegenerateRow,
  OracleSizeExceeded,
  BadDegree,
  ShapeError,
  NotSymmetric,
  ZeroMatrix,
  BadTolerance,
  IllConditioned,
  CannotLeaveOneOut,
  BoundInapplicable,
  BadLambda,
  BadThreshold,
  EmptySelection,
  BadK,
  TrainingDiverged,
  InvalidArgument,
  ConfigError,
  IoError,
};

std::string_view to_string(ErrorCode code);

// Numerical failures map to exit code 2 in the runner, everything else to 1.
bool is_numerical(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace linattn
