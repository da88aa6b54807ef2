#include "endcharge/errors.hpp"

namespace endcharge {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParse: return "Parse";
    case ErrorCode::kInvalidTree: return "InvalidTree";
    case ErrorCode::kMalformedRegion: return "MalformedRegion";
    case ErrorCode::kTreeMismatch: return "TreeMismatch";
    case ErrorCode::kInvalidMeasure: return "InvalidMeasure";
    case ErrorCode::kInfiniteDifference: return "InfiniteDifference";
    case ErrorCode::kBadEdge: return "BadEdge";
    case ErrorCode::kNonPositiveBlock: return "NonPositiveBlock";
    case ErrorCode::kMassNotConserved: return "MassNotConserved";
    case ErrorCode::kBadSupport: return "BadSupport";
    case ErrorCode::kCNotDefined: return "CNotDefined";
    case ErrorCode::kInvalidCharge: return "InvalidCharge";
    case ErrorCode::kBadDecomposition: return "BadDecomposition";
    case ErrorCode::kInfeasibleTransfer: return "InfeasibleTransfer";
    case ErrorCode::kPreconditionFailed: return "PreconditionFailed";
    case ErrorCode::kInvalidMorphism: return "InvalidMorphism";
    case ErrorCode::kNotLiftable: return "NotLiftable";
    case ErrorCode::kRange: return "Range";
    case ErrorCode::kCutTooShallow: return "CutTooShallow";
    case ErrorCode::kNotAStar: return "NotAStar";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), detail_(message) {}

WordError::WordError(ErrorCode code, std::size_t position, const std::string& message)
    : Error(code, "move " + std::to_string(position) + ": " + message), position_(position) {}

}  // namespace endcharge
