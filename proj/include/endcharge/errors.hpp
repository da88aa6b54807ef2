#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace endcharge {

enum class ErrorCode {
  kParse,
  kInvalidTree,
  kMalformedRegion,
  kTreeMismatch,
  kInvalidMeasure,
  kInfiniteDifference,
  kBadEdge,
  kNonPositiveBlock,
  kMassNotConserved,
  kBadSupport,
  kCNotDefined,
  kInvalidCharge,
  kBadDecomposition,
  kInfeasibleTransfer,
  kPreconditionFailed,
  kInvalidMorphism,
  kNotLiftable,
  kRange,
  kCutTooShallow,
  kNotAStar,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }
  // The message without the code prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

// Failure while folding a word; position is 1-based.
class WordError : public Error {
 public:
  WordError(ErrorCode code, std::size_t position, const std::string& message);

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace endcharge
