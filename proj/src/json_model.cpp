#include "easepatch/json_model.hpp"

#include <charconv>
#include <limits>

namespace easepatch {

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
}

std::string serialize(const Json& value) { return value.dump(2) + "\n"; }

std::string serialize_compact(const Json& value) { return value.dump(); }

namespace {

bool numbers_equal(const Json& a, const Json& b) {
  if (a.is_number_float() || b.is_number_float()) {
    return a.get<double>() == b.get<double>();
  }
  if (a.is_number_unsigned() && b.is_number_unsigned()) {
    return a.get<std::uint64_t>() == b.get<std::uint64_t>();
  }
  if (a.is_number_unsigned() || b.is_number_unsigned()) {
    const Json& u = a.is_number_unsigned() ? a : b;
    const Json& s = a.is_number_unsigned() ? b : a;
    const auto sv = s.get<std::int64_t>();
    return sv >= 0 && static_cast<std::uint64_t>(sv) == u.get<std::uint64_t>();
  }
  return a.get<std::int64_t>() == b.get<std::int64_t>();
}

}  // namespace

bool json_equal(const Json& a, const Json& b) {
  if (a.is_number() && b.is_number()) return numbers_equal(a, b);
  if (a.type() != b.type()) return false;
  switch (a.type()) {
    case Json::value_t::array: {
      if (a.size() != b.size()) return false;
      for (std::size_t i = 0; i < a.size(); ++i) {
        if (!json_equal(a[i], b[i])) return false;
      }
      return true;
    }
    case Json::value_t::object: {
      if (a.size() != b.size()) return false;
      for (const auto& [key, value] : a.items()) {
        auto it = b.find(key);
        if (it == b.end() || !json_equal(value, *it)) return false;
      }
      return true;
    }
    default:
      return a == b;
  }
}

std::string escape_token(std::string_view token) {
  std::string out;
  out.reserve(token.size());
  for (char c : token) {
    if (c == '~') {
      out += "~0";
    } else if (c == '/') {
      out += "~1";
    } else {
      out += c;
    }
  }
  return out;
}

namespace {

std::string unescape_token(std::string_view raw, std::string_view whole) {
  std::string out;
  out.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] != '~') {
      out += raw[i];
      continue;
    }
    if (i + 1 < raw.size() && (raw[i + 1] == '0' || raw[i + 1] == '1')) {
      out += raw[i + 1] == '0' ? '~' : '/';
      ++i;
    } else {
      throw Error(ErrorKind::InvalidEscape,
                  "invalid escape sequence in JSON pointer '" + std::string(whole) + "'");
    }
  }
  return out;
}

}  // namespace

JsonPointer JsonPointer::parse(std::string_view text) {
  if (text.empty()) return {};
  std::string_view body = text;
  if (body.front() == '/') body.remove_prefix(1);

  std::vector<std::string> tokens;
  while (true) {
    const auto slash = body.find('/');
    tokens.push_back(unescape_token(body.substr(0, slash), text));
    if (slash == std::string_view::npos) break;
    body.remove_prefix(slash + 1);
  }
  return JsonPointer(std::move(tokens));
}

std::string JsonPointer::to_string() const {
  std::string out;
  for (const auto& token : tokens_) {
    out += '/';
    out += escape_token(token);
  }
  return out;
}

JsonPointer JsonPointer::parent() const {
  if (tokens_.empty()) throw Error(ErrorKind::EmptyPointer, "the root pointer has no parent");
  return JsonPointer(std::vector<std::string>(tokens_.begin(), tokens_.end() - 1));
}

JsonPointer JsonPointer::operator/(std::string token) const {
  auto tokens = tokens_;
  tokens.push_back(std::move(token));
  return JsonPointer(std::move(tokens));
}

bool JsonPointer::is_prefix_of(const JsonPointer& other) const {
  if (tokens_.size() > other.tokens_.size()) return false;
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (tokens_[i] != other.tokens_[i]) return false;
  }
  return true;
}

std::optional<std::size_t> parse_array_index(std::string_view token) {
  if (token.empty()) return std::nullopt;
  if (token.size() > 1 && token.front() == '0') return std::nullopt;
  for (char c : token) {
    if (c < '0' || c > '9') return std::nullopt;
  }
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec == std::errc::result_out_of_range) return std::numeric_limits<std::size_t>::max();
  return value;
}

namespace {

template <typename JsonRef>
JsonRef& resolve_impl(JsonRef& doc, const JsonPointer& ptr) {
  JsonRef* current = &doc;
  JsonPointer walked;
  for (const auto& token : ptr.tokens()) {
    walked = walked / token;
    if (current->is_object()) {
      auto it = current->find(token);
      if (it == current->end()) {
        throw Error(ErrorKind::PathNotFound, "no member at '" + walked.to_string() + "'");
      }
      current = &*it;
    } else if (current->is_array()) {
      if (token == "-") {
        throw Error(ErrorKind::PathNotFound,
                    "'-' does not name an existing element at '" + walked.to_string() + "'");
      }
      const auto index = parse_array_index(token);
      if (!index) {
        throw Error(ErrorKind::TypeMismatch,
                    "'" + token + "' is not an array index at '" + walked.to_string() + "'");
      }
      if (*index >= current->size()) {
        throw Error(ErrorKind::PathNotFound, "index out of range at '" + walked.to_string() + "'");
      }
      current = &(*current)[*index];
    } else {
      throw Error(ErrorKind::TypeMismatch,
                  "cannot descend into a scalar at '" + walked.to_string() + "'");
    }
  }
  return *current;
}

}  // namespace

const Json& resolve(const Json& doc, const JsonPointer& ptr) { return resolve_impl(doc, ptr); }

Json& resolve(Json& doc, const JsonPointer& ptr) { return resolve_impl(doc, ptr); }

const Json* find(const Json& doc, const JsonPointer& ptr) noexcept {
  const Json* current = &doc;
  for (const auto& token : ptr.tokens()) {
    if (current->is_object()) {
      auto it = current->find(token);
      if (it == current->end()) return nullptr;
      current = &*it;
    } else if (current->is_array()) {
      const auto index = parse_array_index(token);
      if (!index || *index >= current->size()) return nullptr;
      current = &(*current)[*index];
    } else {
      return nullptr;
    }
  }
  return current;
}

std::pair<JsonPointer, std::string> parent_and_leaf(const JsonPointer& ptr) {
  if (ptr.empty()) throw Error(ErrorKind::EmptyPointer, "the root pointer has no parent");
  return {ptr.parent(), ptr.back()};
}

}  // namespace easepatch
