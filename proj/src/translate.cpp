#include "easepatch/translate.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "easepatch/diff.hpp"

namespace easepatch {

namespace {

Json encode_or_throw(const Json& original, KeyGenerator& keys) {
  try {
    return encode(original, keys);
  } catch (const Error& e) {
    throw Error(ErrorKind::EncodeError, std::string("cannot encode document: ") + e.what());
  }
}

void require_ease(const Json& encoded) {
  const auto violations = validate_ease(encoded);
  if (!violations.empty()) {
    throw Error(ErrorKind::NotEase, "at '" + violations.front().location.to_string() +
                                        "': " + violations.front().message);
  }
}

// Index-addressed pointer -> key-addressed pointer, walking `encoded`.
JsonPointer index_to_key(const Json& encoded, const JsonPointer& standard) {
  const Json* current = &encoded;
  JsonPointer out;
  for (const auto& token : standard.tokens()) {
    if (is_ease_list(*current)) {
      const auto order = list_order(*current);
      const auto index = parse_array_index(token);
      if (!index || *index >= order.size()) {
        throw Error(ErrorKind::PathNotFound, "no list element '" + token + "' under '" +
                                                 out.to_string() + "' in '" +
                                                 standard.to_string() + "'");
      }
      out = out / order[*index];
      current = &current->at(order[*index]);
    } else if (current->is_object()) {
      auto it = current->find(token);
      if (it == current->end() || token == kOrderKey) {
        throw Error(ErrorKind::PathNotFound, "no member '" + token + "' under '" + out.to_string() +
                                                 "' in '" + standard.to_string() + "'");
      }
      out = out / token;
      current = &*it;
    } else if (current->is_array()) {
      const auto index = parse_array_index(token);
      if (!index || *index >= current->size()) {
        throw Error(ErrorKind::PathNotFound, "no element '" + token + "' in '" +
                                                 standard.to_string() + "'");
      }
      out = out / token;
      current = &(*current)[*index];
    } else {
      throw Error(ErrorKind::PathNotFound,
                  "'" + standard.to_string() + "' descends into a scalar");
    }
  }
  return out;
}

JsonPointer key_to_index(const Json& encoded, const JsonPointer& ease) {
  const Json* current = &encoded;
  JsonPointer out;
  for (const auto& token : ease.tokens()) {
    if (is_ease_list(*current)) {
      const auto order = list_order(*current);
      const auto it = std::find(order.begin(), order.end(), token);
      if (it == order.end()) {
        throw Error(ErrorKind::PathNotFound,
                    "no list entry '" + token + "' in '" + ease.to_string() + "'");
      }
      out = out / std::to_string(it - order.begin());
      current = &current->at(token);
    } else {
      const Json* next = find(*current, JsonPointer({token}));
      if (next == nullptr) {
        throw Error(ErrorKind::PathNotFound, "no member '" + token + "' in '" + ease.to_string() + "'");
      }
      out = out / token;
      current = next;
    }
  }
  return out;
}

class Lifter {
 public:
  Lifter(const Json& encoded, KeyGenerator& keys)
      : keys_(keys), plain_(decode(encoded)), encoded_original_(encoded), state_(encoded) {}

  Patch run(const Patch& standard) {
    for (std::size_t i = 0; i < standard.size(); ++i) {
      const PatchOp& op = standard[i];
      Json moved_value;
      try {
        if (op.op == OpType::Copy || op.op == OpType::Move) {
          moved_value = resolve(plain_, op.from.value_or(JsonPointer{}));
        }
        apply_op_in_place(plain_, op);
      } catch (const Error& e) {
        throw Error(ErrorKind::PatchApplyError, "op " + std::to_string(i) + ": " + e.what());
      }
      lift(op, std::move(moved_value));
    }
    flush_orders();

    if (!json_equal(apply_patch(encoded_original_, emitted_), state_) ||
        !json_equal(decode(state_), plain_)) {
      throw std::logic_error("lifted patch does not reproduce the standard patch");
    }
    return std::move(emitted_);
  }

 private:
  void lift(const PatchOp& op, Json moved_value) {
    switch (op.op) {
      case OpType::Add:
        add(op.path, op.value.value_or(Json()));
        break;
      case OpType::Remove:
        remove(op.path);
        break;
      case OpType::Replace: {
        const auto target = index_to_key(state_, op.path);
        Json value = encode(op.value.value_or(Json()), keys_);
        emitted_.push_back(PatchOp::replace(target, value));
        resolve(state_, target) = std::move(value);
        break;
      }
      case OpType::Test: {
        flush_orders();
        const auto target = index_to_key(state_, op.path);
        const Json& current = resolve(state_, target);
        const Json& expected = op.value.value_or(Json());
        emitted_.push_back(PatchOp::test(
            target, json_equal(decode(current), expected) ? current : encode(expected, keys_)));
        break;
      }
      case OpType::Copy:
        add(op.path, std::move(moved_value));
        break;
      case OpType::Move:
        if (op.from.value_or(JsonPointer{}) == op.path) break;
        remove(op.from.value_or(JsonPointer{}));
        add(op.path, std::move(moved_value));
        break;
    }
  }

  void add(const JsonPointer& path, const Json& plain_value) {
    Json value = encode(plain_value, keys_);
    if (path.empty()) {
      emitted_.push_back(PatchOp::add(path, value));
      state_ = std::move(value);
      return;
    }
    const auto parent_path = index_to_key(state_, path.parent());
    Json& parent = resolve(state_, parent_path);
    if (!is_ease_list(parent)) {
      emitted_.push_back(PatchOp::add(parent_path / path.back(), value));
      parent[path.back()] = std::move(value);
      return;
    }
    auto order = list_order(parent);
    const std::size_t position =
        path.back() == "-" ? order.size() : parse_array_index(path.back()).value_or(order.size());
    const auto key = keys_.next(std::set<std::string>(order.begin(), order.end()));
    emitted_.push_back(PatchOp::add(parent_path / key, value));
    parent[key] = std::move(value);
    order.insert(order.begin() + static_cast<std::ptrdiff_t>(std::min(position, order.size())), key);
    parent[std::string(kOrderKey)] = format_display_order(order);
    touch(parent_path);
  }

  void remove(const JsonPointer& path) {
    const auto target = index_to_key(state_, path);
    Json& parent = resolve(state_, target.parent());
    emitted_.push_back(PatchOp::remove(target));
    if (is_ease_list(parent)) {
      auto order = list_order(parent);
      order.erase(std::find(order.begin(), order.end(), target.back()));
      parent.erase(target.back());
      parent[std::string(kOrderKey)] = format_display_order(order);
      touch(target.parent());
    } else {
      parent.erase(target.back());
    }
  }

  void touch(const JsonPointer& list) {
    if (std::find(touched_.begin(), touched_.end(), list) == touched_.end()) {
      touched_.push_back(list);
    }
  }

  // One replace per touched list so the emitted patch carries its final order.
  void flush_orders() {
    if (touched_.empty()) return;
    const Json replayed = apply_patch(encoded_original_, emitted_);
    const std::string order_key(kOrderKey);
    for (const auto& list : touched_) {
      const Json* want = find(state_, list);
      const Json* have = find(replayed, list);
      if (want == nullptr || have == nullptr || !is_ease_list(*want) || !is_ease_list(*have)) {
        continue;
      }
      if (want->at(order_key) != have->at(order_key)) {
        emitted_.push_back(PatchOp::replace(list / order_key, want->at(order_key)));
      }
    }
    touched_.clear();
  }

  KeyGenerator& keys_;
  Json plain_;
  Json encoded_original_;
  Json state_;
  Patch emitted_;
  std::vector<JsonPointer> touched_;
};

}  // namespace

Patch ease_patch_to_standard(const Json& original, const KeyPolicy& policy, const Patch& ease_patch) {
  KeyGenerator keys(policy);
  const Json encoded = encode_or_throw(original, keys);

  Json applied;
  try {
    applied = apply_patch(encoded, ease_patch);
  } catch (const Error& e) {
    throw Error(ErrorKind::PatchApplyError, e.what());
  }

  Json decoded;
  try {
    decoded = decode(applied);
  } catch (const Error& e) {
    throw Error(ErrorKind::DecodeError, e.what());
  }
  return diff(original, decoded);
}

Patch standard_patch_to_ease(const Json& original, const KeyPolicy& policy, const Patch& standard_patch) {
  KeyGenerator keys(policy);
  const Json encoded = encode_or_throw(original, keys);
  return Lifter(encoded, keys).run(standard_patch);
}

Patch lift_standard_patch(const Json& encoded, const Patch& standard_patch, KeyGenerator& fresh_keys) {
  require_ease(encoded);
  return Lifter(encoded, fresh_keys).run(standard_patch);
}

std::vector<JsonPointer> standard_patch_paths_to_ease(const Json& encoded,
                                                      const std::vector<JsonPointer>& standard_paths) {
  require_ease(encoded);
  std::vector<JsonPointer> out;
  out.reserve(standard_paths.size());
  for (const auto& path : standard_paths) out.push_back(index_to_key(encoded, path));
  return out;
}

std::vector<JsonPointer> ease_paths_to_standard(const Json& encoded,
                                                const std::vector<JsonPointer>& ease_paths) {
  require_ease(encoded);
  std::vector<JsonPointer> out;
  out.reserve(ease_paths.size());
  for (const auto& path : ease_paths) out.push_back(key_to_index(encoded, path));
  return out;
}

}  // namespace easepatch
