#include "linattn/error.hpp"

namespace linattn {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::RankInfeasible: return "RankInfeasible";
    case ErrorCode::BadSpectrum: return "BadSpectrum";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::LabelOutOfRange: return "LabelOutOfRange";
    case ErrorCode::DegenerateRow: return "DegenerateRow";
    case ErrorCode::OracleSizeExceeded: return "OracleSizeExceeded";
    case ErrorCode::BadDegree: return "BadDegree";
    case ErrorCode::ShapeError: return "ShapeError";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::ZeroMatrix: return "ZeroMatrix";
    case ErrorCode::BadTolerance: return "BadTolerance";
    case ErrorCode::IllConditioned: return "IllConditioned";
    case ErrorCode::CannotLeaveOneOut: return "CannotLeaveOneOut";
    case ErrorCode::BoundInapplicable: return "BoundInapplicable";
    case ErrorCode::BadLambda: return "BadLambda";
    case ErrorCode::BadThreshold: return "BadThreshold";
    case ErrorCode::EmptySelection: return "EmptySelection";
    case ErrorCode::BadK: return "BadK";
    case ErrorCode::TrainingDiverged: return "TrainingDiverged";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

bool is_numerical(ErrorCode code) {
  switch (code) {
    case ErrorCode::IllConditioned:
    case ErrorCode::TrainingDiverged:
    case ErrorCode::NotSymmetric:
    case ErrorCode::ZeroMatrix:
    case ErrorCode::DegenerateRow:
    case ErrorCode::BoundInapplicable:
      return true;
    default:
      return false;
  }
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace linattn
