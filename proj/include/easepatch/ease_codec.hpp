#pragma once

// EASE: arrays are rewritten as objects whose members are addressed by short
// random keys, plus a reserved member holding the comma-separated key order.
//
//   ["Alice", "Bob"]  <->  {"qd": "Alice", "mw": "Bob", "list_display_order": "qd,mw"}
//
// Patches against the encoded form never need index arithmetic: elements are
// addressed by key, and insertion/removal/reordering only touches the order
// string.

#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "easepatch/json_model.hpp"

namespace easepatch {

inline constexpr std::string_view kOrderKey = "list_display_order";

struct KeyPolicy {
  std::uint64_t seed = 0;
};

/// [a-z]{2,}
bool is_valid_ease_key(std::string_view key) noexcept;

/// An object carrying the reserved order key.
bool is_ease_list(const Json& value) noexcept;

/// Seeded key source shared across one encoding traversal. Keys are drawn
/// uniformly from the two-letter space; once all 676 are taken the length
/// grows by one, and so on. The draw uses raw mt19937_64 output so results
/// are identical on every standard library.
class KeyGenerator {
 public:
  explicit KeyGenerator(const KeyPolicy& policy) : rng_(policy.seed) {}

  std::string next(const std::set<std::string>& taken);

 private:
  std::mt19937_64 rng_;
};

/// One key from a fresh generator seeded by `policy`.
std::string generate_key(const std::set<std::string>& taken, const KeyPolicy& policy);

/// Throws Error(ReservedKeyCollision) if any input object already uses the
/// order key.
Json encode(const Json& doc, const KeyPolicy& policy);
Json encode(const Json& doc, KeyGenerator& keys);

/// Throws the first violation validate_ease() would report
/// (MalformedOrder or InvalidKeyFormat).
Json decode(const Json& doc);

/// Splits on commas and trims whitespace; "" gives an empty list.
/// Throws InvalidKeyFormat or DuplicateKey.
std::vector<std::string> parse_display_order(std::string_view text);

/// Comma-joined, no spaces. Throws DuplicateKey.
std::string format_display_order(const std::vector<std::string>& keys);

/// Order of an EASE list object; throws like decode() if the list is invalid
/// at this level (children are not inspected).
std::vector<std::string> list_order(const Json& ease_list);

struct EaseViolation {
  ErrorKind kind;
  JsonPointer location;
  std::string message;
};

/// Every problem that would make decode() fail, with the pointer of the
/// offending list. Never throws.
std::vector<EaseViolation> validate_ease(const Json& doc);

}  // namespace easepatch
