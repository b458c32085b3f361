#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace outfit {

enum class ErrorCode {
  EmptyImage,
  DecodeError,
  UnknownLabel,
  DuplicateTupleId,
  EmptyTrainingSet,
  EmptyIndex,
  NoEligibleItems,
  UnsupportedQuery,
  MixedQueryIds,
  EmptyInput,
  UnknownModel,
  DuplicateRating,
  MissingImage,
  DuplicateId,
  RoleMismatch,
  ParseError,
  DanglingReference,
  InvalidConfig,
  InvalidArgument,
  IoError,
  UnknownQuerySet,
  UnknownSession,
  SessionComplete,
  OutOfOrderSubmission,
  ValueOutOfRange,
  NoRatings,
};

std::string_view to_string(ErrorCode code);

// Every failure surfaced by the library carries a machine-readable code; the
// HTTP layer maps codes to status lines and the CLI prints "<code>: <what>".
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace outfit
