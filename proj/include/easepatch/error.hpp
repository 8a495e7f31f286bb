#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace easepatch {

enum class ErrorKind {
  ParseError,
  InvalidEscape,
  PathNotFound,
  TypeMismatch,
  EmptyPointer,
  ReservedKeyCollision,
  MalformedOrder,
  InvalidKeyFormat,
  DuplicateKey,
  NotAnArray,
  UnknownOp,
  MissingField,
  InvalidField,
  TestFailed,
  IndexOutOfBounds,
  InvalidIndexToken,
  InvalidMove,
  NotEase,
  EncodeError,
  PatchApplyError,
  DecodeError,
  MissingPrediction,
  InvalidExample,
  TransportError,
  UnparseableVerdict,
  PoolTooSmall,
  SchemaViolation,
  IoError,
};

std::string_view to_string(ErrorKind kind) noexcept;

// Base exception for every failure raised by the library. The kind is the
// machine-readable part; what() carries the human detail.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(detail), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace easepatch
