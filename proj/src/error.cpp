#include "easepatch/error.hpp"

namespace easepatch {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::InvalidEscape: return "InvalidEscape";
    case ErrorKind::PathNotFound: return "PathNotFound";
    case ErrorKind::TypeMismatch: return "TypeMismatch";
    case ErrorKind::EmptyPointer: return "EmptyPointer";
    case ErrorKind::ReservedKeyCollision: return "ReservedKeyCollision";
    case ErrorKind::MalformedOrder: return "MalformedOrder";
    case ErrorKind::InvalidKeyFormat: return "InvalidKeyFormat";
    case ErrorKind::DuplicateKey: return "DuplicateKey";
    case ErrorKind::NotAnArray: return "NotAnArray";
    case ErrorKind::UnknownOp: return "UnknownOp";
    case ErrorKind::MissingField: return "MissingField";
    case ErrorKind::InvalidField: return "InvalidField";
    case ErrorKind::TestFailed: return "TestFailed";
    case ErrorKind::IndexOutOfBounds: return "IndexOutOfBounds";
    case ErrorKind::InvalidIndexToken: return "InvalidIndexToken";
    case ErrorKind::InvalidMove: return "InvalidMove";
    case ErrorKind::NotEase: return "NotEase";
    case ErrorKind::EncodeError: return "EncodeError";
    case ErrorKind::PatchApplyError: return "PatchApplyError";
    case ErrorKind::DecodeError: return "DecodeError";
    case ErrorKind::MissingPrediction: return "MissingPrediction";
    case ErrorKind::InvalidExample: return "InvalidExample";
    case ErrorKind::TransportError: return "TransportError";
    case ErrorKind::UnparseableVerdict: return "UnparseableVerdict";
    case ErrorKind::PoolTooSmall: return "PoolTooSmall";
    case ErrorKind::SchemaViolation: return "SchemaViolation";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace easepatch
