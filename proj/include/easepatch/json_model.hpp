#pragma once

// JSON document model and RFC 6901 pointers.
//
// Documents are nlohmann::ordered_json values: object key order survives a
// parse/serialize round trip, integers and floats keep their lexical class.
// Equality used anywhere in this library goes through json_equal(), which
// ignores object key order and treats 1 and 1.0 as equal.

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "easepatch/error.hpp"

namespace easepatch {

using Json = nlohmann::ordered_json;

/// Parses UTF-8 JSON text. Throws Error(ParseError) on malformed input.
Json parse_json(std::string_view text);

/// Canonical form: two-space indent, source key order, trailing newline.
std::string serialize(const Json& value);

/// Single-line form without trailing newline.
std::string serialize_compact(const Json& value);

/// Structural equality: object key order is ignored, integer-valued floats
/// compare equal to integers.
bool json_equal(const Json& a, const Json& b);

class JsonPointer {
 public:
  JsonPointer() = default;
  explicit JsonPointer(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {}

  /// Accepts "" (root), "/a/b" and the slash-less "a/b" form, which is
  /// normalized as if a leading slash were present.
  static JsonPointer parse(std::string_view text);

  /// Always emits the leading-slash form with ~0 / ~1 escapes applied.
  std::string to_string() const;

  const std::vector<std::string>& tokens() const noexcept { return tokens_; }
  bool empty() const noexcept { return tokens_.empty(); }
  std::size_t size() const noexcept { return tokens_.size(); }
  const std::string& back() const { return tokens_.back(); }

  JsonPointer parent() const;
  JsonPointer operator/(std::string token) const;

  /// True when every token of this pointer leads `other` (equal counts).
  bool is_prefix_of(const JsonPointer& other) const;

  friend bool operator==(const JsonPointer&, const JsonPointer&) = default;
  friend auto operator<=>(const JsonPointer&, const JsonPointer&) = default;

 private:
  std::vector<std::string> tokens_;
};

inline JsonPointer parse_pointer(std::string_view text) { return JsonPointer::parse(text); }

std::string escape_token(std::string_view token);

/// Array index per RFC 6901: "0" or a decimal number without leading zeros.
/// Returns nullopt for anything else (including "-"). Values too large for
/// size_t saturate so they are simply out of range.
std::optional<std::size_t> parse_array_index(std::string_view token);

/// Throws PathNotFound for a missing key or index, TypeMismatch when
/// descending into a scalar or using a non-index token on an array.
const Json& resolve(const Json& doc, const JsonPointer& ptr);
Json& resolve(Json& doc, const JsonPointer& ptr);

/// Non-throwing lookup; nullptr when resolve() would throw.
const Json* find(const Json& doc, const JsonPointer& ptr) noexcept;

/// Splits "/a/b/c" into ("/a/b", "c"). Throws EmptyPointer for the root.
std::pair<JsonPointer, std::string> parent_and_leaf(const JsonPointer& ptr);

}  // namespace easepatch
