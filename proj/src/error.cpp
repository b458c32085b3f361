#include "outfit/error.hpp"

namespace outfit {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyImage: return "EmptyImage";
    case ErrorCode::DecodeError: return "DecodeError";
    case ErrorCode::UnknownLabel: return "UnknownLabel";
    case ErrorCode::DuplicateTupleId: return "DuplicateTupleId";
    case ErrorCode::EmptyTrainingSet: return "EmptyTrainingSet";
    case ErrorCode::EmptyIndex: return "EmptyIndex";
    case ErrorCode::NoEligibleItems: return "NoEligibleItems";
    case ErrorCode::UnsupportedQuery: return "UnsupportedQuery";
    case ErrorCode::MixedQueryIds: return "MixedQueryIds";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::UnknownModel: return "UnknownModel";
    case ErrorCode::DuplicateRating: return "DuplicateRating";
    case ErrorCode::MissingImage: return "MissingImage";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::RoleMismatch: return "RoleMismatch";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::DanglingReference: return "DanglingReference";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::UnknownQuerySet: return "UnknownQuerySet";
    case ErrorCode::UnknownSession: return "UnknownSession";
    case ErrorCode::SessionComplete: return "SessionComplete";
    case ErrorCode::OutOfOrderSubmission: return "OutOfOrderSubmission";
    case ErrorCode::ValueOutOfRange: return "ValueOutOfRange";
    case ErrorCode::NoRatings: return "NoRatings";
  }
  return "Unknown";
}

}  // namespace outfit
