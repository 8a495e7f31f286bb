#pragma once

// RFC 6902 JSON Patch: parsing, serialization and application.
//
// The engine knows nothing about EASE; an encoded document is just objects,
// so the same code applies index-addressed and key-addressed patches.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "easepatch/json_model.hpp"

namespace easepatch {

enum class OpType { Add, Remove, Replace, Move, Copy, Test };

std::string_view to_string(OpType op) noexcept;
std::optional<OpType> op_from_string(std::string_view name) noexcept;

struct PatchOp {
  OpType op = OpType::Add;
  JsonPointer path;
  std::optional<Json> value;       // add, replace, test
  std::optional<JsonPointer> from;  // move, copy

  static PatchOp add(JsonPointer path, Json value);
  static PatchOp remove(JsonPointer path);
  static PatchOp replace(JsonPointer path, Json value);
  static PatchOp move(JsonPointer from, JsonPointer path);
  static PatchOp copy(JsonPointer from, JsonPointer path);
  static PatchOp test(JsonPointer path, Json value);
};

using Patch = std::vector<PatchOp>;

/// Throws ParseError, NotAnArray, UnknownOp, MissingField, InvalidField or
/// InvalidEscape. Unknown members of an operation object are ignored.
Patch parse_patch(std::string_view text);
Patch patch_from_json(const Json& doc);

Json to_json(const PatchOp& op);
Json to_json(const Patch& patch);

/// Failure of one operation inside a patch.
class PatchError : public Error {
 public:
  PatchError(ErrorKind kind, std::size_t op_index, const std::string& detail)
      : Error(kind, "op " + std::to_string(op_index) + ": " + detail), op_index_(op_index) {}

  std::size_t op_index() const noexcept { return op_index_; }

 private:
  std::size_t op_index_;
};

/// Applies one operation to `doc` in place. On failure `doc` may be left
/// partially modified only for move (never for the other ops).
void apply_op_in_place(Json& doc, const PatchOp& op);

/// Throws Error (PathNotFound, TestFailed, IndexOutOfBounds,
/// InvalidIndexToken, TypeMismatch, EmptyPointer, InvalidMove).
Json apply_op(const Json& doc, const PatchOp& op);

/// Applies the operations in order. All-or-nothing: throws PatchError for
/// the first failing operation and leaves no partial result behind.
Json apply_patch(const Json& doc, const Patch& patch);

struct ApplyOutcome {
  Json doc;  // the original document when `error` is set
  std::optional<PatchError> error;

  bool ok() const noexcept { return !error.has_value(); }
};

ApplyOutcome try_apply_patch(const Json& doc, const Patch& patch);

struct PatchIssue {
  std::size_t op_index;
  ErrorKind kind;
  std::string message;
};

/// Dry run. Failing operations are reported and skipped so later problems
/// surface too; the list is empty exactly when apply_patch() succeeds.
std::vector<PatchIssue> validate_patch(const Patch& patch, const Json& doc);

}  // namespace easepatch
