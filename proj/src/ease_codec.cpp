#include "easepatch/ease_codec.hpp"

#include <algorithm>
#include <limits>

namespace easepatch {

namespace {

constexpr std::uint64_t kAlphabet = 26;

std::uint64_t key_space(std::size_t length) {
  std::uint64_t n = 1;
  for (std::size_t i = 0; i < length; ++i) {
    if (n > std::numeric_limits<std::uint64_t>::max() / kAlphabet) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    n *= kAlphabet;
  }
  return n;
}

std::string key_from_ordinal(std::uint64_t ordinal, std::size_t length) {
  std::string key(length, 'a');
  for (std::size_t i = length; i-- > 0;) {
    key[i] = static_cast<char>('a' + ordinal % kAlphabet);
    ordinal /= kAlphabet;
  }
  return key;
}

std::string trim(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t\r\n");
  return std::string(text.substr(first, last - first + 1));
}

}  // namespace

bool is_valid_ease_key(std::string_view key) noexcept {
  return key.size() >= 2 &&
         std::all_of(key.begin(), key.end(), [](char c) { return c >= 'a' && c <= 'z'; });
}

bool is_ease_list(const Json& value) noexcept {
  return value.is_object() && value.contains(kOrderKey);
}

std::string KeyGenerator::next(const std::set<std::string>& taken) {
  for (std::size_t length = 2;; ++length) {
    const std::uint64_t capacity = key_space(length);
    const auto used = static_cast<std::uint64_t>(std::count_if(
        taken.begin(), taken.end(),
        [&](const std::string& k) { return k.size() == length && is_valid_ease_key(k); }));
    if (used >= capacity) continue;

    if (used <= capacity / 2) {
      while (true) {
        auto key = key_from_ordinal(rng_() % capacity, length);
        if (!taken.contains(key)) return key;
      }
    }
    // Dense regime: enumerate the free keys and pick one.
    std::vector<std::uint64_t> free;
    free.reserve(static_cast<std::size_t>(capacity - used));
    for (std::uint64_t ordinal = 0; ordinal < capacity; ++ordinal) {
      if (!taken.contains(key_from_ordinal(ordinal, length))) free.push_back(ordinal);
    }
    return key_from_ordinal(free[rng_() % free.size()], length);
  }
}

std::string generate_key(const std::set<std::string>& taken, const KeyPolicy& policy) {
  KeyGenerator keys(policy);
  return keys.next(taken);
}

namespace {

Json encode_value(const Json& value, KeyGenerator& keys, const JsonPointer& at) {
  if (value.is_array()) {
    std::set<std::string> taken;
    std::vector<std::string> order;
    order.reserve(value.size());
    for (std::size_t i = 0; i < value.size(); ++i) {
      auto key = keys.next(taken);
      taken.insert(key);
      order.push_back(std::move(key));
    }
    Json out = Json::object();
    for (std::size_t i = 0; i < value.size(); ++i) {
      out[order[i]] = encode_value(value[i], keys, at / std::to_string(i));
    }
    out[std::string(kOrderKey)] = format_display_order(order);
    return out;
  }
  if (value.is_object()) {
    if (value.contains(kOrderKey)) {
      throw Error(ErrorKind::ReservedKeyCollision,
                  "object at '" + at.to_string() + "' already uses the reserved key '" +
                      std::string(kOrderKey) + "'");
    }
    Json out = Json::object();
    for (const auto& [key, member] : value.items()) {
      out[key] = encode_value(member, keys, at / key);
    }
    return out;
  }
  return value;
}

// Checks one list object (not its children). Returns the parsed order when
// the list is valid at this level.
std::optional<std::vector<std::string>> check_list(const Json& list, const JsonPointer& at,
                                                   std::vector<EaseViolation>& out) {
  const std::size_t before = out.size();
  const Json& order_value = list.at(std::string(kOrderKey));

  for (const auto& [key, member] : list.items()) {
    if (key == kOrderKey) continue;
    if (!is_valid_ease_key(key)) {
      out.push_back({ErrorKind::InvalidKeyFormat, at, "entry key '" + key + "' is not [a-z]{2,}"});
    }
  }

  if (!order_value.is_string()) {
    out.push_back({ErrorKind::MalformedOrder, at, "order value is not a string"});
    return std::nullopt;
  }

  std::vector<std::string> order;
  try {
    order = parse_display_order(order_value.get<std::string>());
  } catch (const Error& e) {
    const auto kind = e.kind() == ErrorKind::DuplicateKey ? ErrorKind::MalformedOrder : e.kind();
    out.push_back({kind, at, e.what()});
    return std::nullopt;
  }

  std::vector<std::string> dangling;
  for (const auto& key : order) {
    if (!list.contains(key)) dangling.push_back(key);
  }
  std::vector<std::string> omitted;
  const std::set<std::string> listed(order.begin(), order.end());
  for (const auto& [key, member] : list.items()) {
    if (key != kOrderKey && !listed.contains(key)) omitted.push_back(key);
  }
  if (!dangling.empty() || !omitted.empty()) {
    std::string message = "order string does not match entries;";
    if (!dangling.empty()) message += " missing entries: " + format_display_order(dangling) + ";";
    if (!omitted.empty()) message += " unlisted entries: " + format_display_order(omitted) + ";";
    message.pop_back();
    out.push_back({ErrorKind::MalformedOrder, at, std::move(message)});
  }
  if (out.size() != before) return std::nullopt;
  return order;
}

void validate_value(const Json& value, const JsonPointer& at, std::vector<EaseViolation>& out) {
  if (value.is_object()) {
    if (value.contains(kOrderKey)) check_list(value, at, out);
    for (const auto& [key, member] : value.items()) {
      if (key == kOrderKey) continue;
      validate_value(member, at / key, out);
    }
  } else if (value.is_array()) {
    for (std::size_t i = 0; i < value.size(); ++i) {
      validate_value(value[i], at / std::to_string(i), out);
    }
  }
}

Json decode_value(const Json& value) {
  if (value.is_object()) {
    if (value.contains(kOrderKey)) {
      Json out = Json::array();
      for (const auto& key : list_order(value)) out.push_back(decode_value(value.at(key)));
      return out;
    }
    Json out = Json::object();
    for (const auto& [key, member] : value.items()) out[key] = decode_value(member);
    return out;
  }
  if (value.is_array()) {
    Json out = Json::array();
    for (const auto& member : value) out.push_back(decode_value(member));
    return out;
  }
  return value;
}

}  // namespace

Json encode(const Json& doc, const KeyPolicy& policy) {
  KeyGenerator keys(policy);
  return encode(doc, keys);
}

Json encode(const Json& doc, KeyGenerator& keys) { return encode_value(doc, keys, JsonPointer{}); }

Json decode(const Json& doc) {
  const auto violations = validate_ease(doc);
  if (!violations.empty()) {
    const auto& first = violations.front();
    throw Error(first.kind, "at '" + first.location.to_string() + "': " + first.message);
  }
  return decode_value(doc);
}

std::vector<std::string> parse_display_order(std::string_view text) {
  std::vector<std::string> keys;
  if (trim(text).empty()) return keys;
  std::set<std::string> seen;
  while (true) {
    const auto comma = text.find(',');
    auto key = trim(text.substr(0, comma));
    if (!is_valid_ease_key(key)) {
      throw Error(ErrorKind::InvalidKeyFormat,
                  "order entry '" + key + "' is not a valid key");
    }
    if (!seen.insert(key).second) {
      throw Error(ErrorKind::DuplicateKey, "order lists key '" + key + "' more than once");
    }
    keys.push_back(std::move(key));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return keys;
}

std::string format_display_order(const std::vector<std::string>& keys) {
  std::set<std::string_view> seen;
  std::string out;
  for (const auto& key : keys) {
    if (!seen.insert(key).second) {
      throw Error(ErrorKind::DuplicateKey, "key '" + key + "' appears more than once");
    }
    if (!out.empty()) out += ',';
    out += key;
  }
  return out;
}

std::vector<std::string> list_order(const Json& ease_list) {
  std::vector<EaseViolation> violations;
  auto order = check_list(ease_list, JsonPointer{}, violations);
  if (!order) {
    throw Error(violations.front().kind, violations.front().message);
  }
  return *order;
}

std::vector<EaseViolation> validate_ease(const Json& doc) {
  std::vector<EaseViolation> out;
  validate_value(doc, JsonPointer{}, out);
  return out;
}

}  // namespace easepatch
