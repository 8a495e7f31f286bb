#include "easepatch/patch.hpp"

#include <array>
#include <utility>

namespace easepatch {

namespace {

constexpr std::array<std::pair<OpType, std::string_view>, 6> kOpNames{{
    {OpType::Add, "add"},
    {OpType::Remove, "remove"},
    {OpType::Replace, "replace"},
    {OpType::Move, "move"},
    {OpType::Copy, "copy"},
    {OpType::Test, "test"},
}};

bool needs_value(OpType op) {
  return op == OpType::Add || op == OpType::Replace || op == OpType::Test;
}

bool needs_from(OpType op) { return op == OpType::Move || op == OpType::Copy; }

}  // namespace

std::string_view to_string(OpType op) noexcept {
  for (const auto& [type, name] : kOpNames) {
    if (type == op) return name;
  }
  return "unknown";
}

std::optional<OpType> op_from_string(std::string_view name) noexcept {
  for (const auto& [type, candidate] : kOpNames) {
    if (candidate == name) return type;
  }
  return std::nullopt;
}

PatchOp PatchOp::add(JsonPointer path, Json value) {
  return {OpType::Add, std::move(path), std::move(value), std::nullopt};
}
PatchOp PatchOp::remove(JsonPointer path) {
  return {OpType::Remove, std::move(path), std::nullopt, std::nullopt};
}
PatchOp PatchOp::replace(JsonPointer path, Json value) {
  return {OpType::Replace, std::move(path), std::move(value), std::nullopt};
}
PatchOp PatchOp::move(JsonPointer from, JsonPointer path) {
  return {OpType::Move, std::move(path), std::nullopt, std::move(from)};
}
PatchOp PatchOp::copy(JsonPointer from, JsonPointer path) {
  return {OpType::Copy, std::move(path), std::nullopt, std::move(from)};
}
PatchOp PatchOp::test(JsonPointer path, Json value) {
  return {OpType::Test, std::move(path), std::move(value), std::nullopt};
}

namespace {

JsonPointer read_pointer_field(const Json& item, const char* field, std::size_t index) {
  auto it = item.find(field);
  if (it == item.end()) {
    throw Error(ErrorKind::MissingField,
                "op " + std::to_string(index) + ": missing '" + field + "'");
  }
  if (!it->is_string()) {
    throw Error(ErrorKind::InvalidField,
                "op " + std::to_string(index) + ": '" + field + "' must be a string");
  }
  return JsonPointer::parse(it->get<std::string>());
}

}  // namespace

Patch patch_from_json(const Json& doc) {
  if (!doc.is_array()) throw Error(ErrorKind::NotAnArray, "a patch must be a JSON array");
  Patch patch;
  patch.reserve(doc.size());
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const Json& item = doc[i];
    const auto where = "op " + std::to_string(i) + ": ";
    if (!item.is_object()) {
      throw Error(ErrorKind::InvalidField, where + "operation must be an object");
    }
    auto op_it = item.find("op");
    if (op_it == item.end()) throw Error(ErrorKind::MissingField, where + "missing 'op'");
    if (!op_it->is_string()) throw Error(ErrorKind::InvalidField, where + "'op' must be a string");
    const auto name = op_it->get<std::string>();
    const auto type = op_from_string(name);
    if (!type) throw Error(ErrorKind::UnknownOp, where + "unknown op '" + name + "'");

    PatchOp op;
    op.op = *type;
    op.path = read_pointer_field(item, "path", i);
    if (needs_value(*type)) {
      auto value_it = item.find("value");
      if (value_it == item.end()) {
        throw Error(ErrorKind::MissingField, where + "'" + name + "' requires 'value'");
      }
      op.value = *value_it;
    }
    if (needs_from(*type)) op.from = read_pointer_field(item, "from", i);
    patch.push_back(std::move(op));
  }
  return patch;
}

Patch parse_patch(std::string_view text) { return patch_from_json(parse_json(text)); }

Json to_json(const PatchOp& op) {
  Json out = Json::object();
  out["op"] = std::string(to_string(op.op));
  if (op.from && needs_from(op.op)) out["from"] = op.from->to_string();
  out["path"] = op.path.to_string();
  if (op.value && needs_value(op.op)) out["value"] = *op.value;
  return out;
}

Json to_json(const Patch& patch) {
  Json out = Json::array();
  for (const auto& op : patch) out.push_back(to_json(op));
  return out;
}

namespace {

std::size_t array_index(const std::string& token, const JsonPointer& path) {
  const auto index = parse_array_index(token);
  if (!index) {
    throw Error(ErrorKind::InvalidIndexToken,
                "'" + token + "' is not a valid array index in '" + path.to_string() + "'");
  }
  return *index;
}

Json& container_of(Json& doc, const JsonPointer& path) {
  Json& parent = resolve(doc, path.parent());
  if (!parent.is_object() && !parent.is_array()) {
    throw Error(ErrorKind::TypeMismatch,
                "parent of '" + path.to_string() + "' is neither an object nor an array");
  }
  return parent;
}

// Existing location addressed by `path`; the leaf token follows the stricter
// patch rules for array indices.
Json& existing(Json& doc, const JsonPointer& path) {
  if (path.empty()) return doc;
  Json& parent = container_of(doc, path);
  const auto& leaf = path.back();
  if (parent.is_object()) {
    auto it = parent.find(leaf);
    if (it == parent.end()) {
      throw Error(ErrorKind::PathNotFound, "no member at '" + path.to_string() + "'");
    }
    return *it;
  }
  if (leaf == "-") {
    throw Error(ErrorKind::PathNotFound,
                "'-' does not name an existing element in '" + path.to_string() + "'");
  }
  const auto index = array_index(leaf, path);
  if (index >= parent.size()) {
    throw Error(ErrorKind::PathNotFound, "index out of range at '" + path.to_string() + "'");
  }
  return parent[index];
}

void do_add(Json& doc, const JsonPointer& path, Json value) {
  if (path.empty()) {
    doc = std::move(value);
    return;
  }
  Json& parent = container_of(doc, path);
  const auto& leaf = path.back();
  if (parent.is_object()) {
    parent[leaf] = std::move(value);
    return;
  }
  if (leaf == "-") {
    parent.push_back(std::move(value));
    return;
  }
  const auto index = array_index(leaf, path);
  if (index > parent.size()) {
    throw Error(ErrorKind::IndexOutOfBounds,
                "index " + leaf + " exceeds array length " + std::to_string(parent.size()) +
                    " at '" + path.to_string() + "'");
  }
  parent.insert(parent.begin() + static_cast<std::ptrdiff_t>(index), std::move(value));
}

void do_remove(Json& doc, const JsonPointer& path) {
  auto [parent_path, leaf] = parent_and_leaf(path);
  existing(doc, path);
  Json& parent = resolve(doc, parent_path);
  if (parent.is_object()) {
    parent.erase(leaf);
  } else {
    parent.erase(parent.begin() + static_cast<std::ptrdiff_t>(*parse_array_index(leaf)));
  }
}

}  // namespace

void apply_op_in_place(Json& doc, const PatchOp& op) {
  switch (op.op) {
    case OpType::Add:
      do_add(doc, op.path, op.value.value_or(Json()));
      return;
    case OpType::Remove:
      do_remove(doc, op.path);
      return;
    case OpType::Replace:
      existing(doc, op.path) = op.value.value_or(Json());
      return;
    case OpType::Test: {
      const Json& actual = existing(doc, op.path);
      if (!json_equal(actual, op.value.value_or(Json()))) {
        throw Error(ErrorKind::TestFailed, "value at '" + op.path.to_string() + "' differs");
      }
      return;
    }
    case OpType::Copy: {
      const JsonPointer from = op.from.value_or(JsonPointer{});
      Json value = existing(doc, from);
      do_add(doc, op.path, std::move(value));
      return;
    }
    case OpType::Move: {
      const JsonPointer from = op.from.value_or(JsonPointer{});
      Json value = existing(doc, from);
      if (from == op.path) return;
      if (from.is_prefix_of(op.path)) {
        throw Error(ErrorKind::InvalidMove, "cannot move '" + from.to_string() +
                                                "' into its own child '" + op.path.to_string() +
                                                "'");
      }
      do_remove(doc, from);
      do_add(doc, op.path, std::move(value));
      return;
    }
  }
}

Json apply_op(const Json& doc, const PatchOp& op) {
  Json out = doc;
  apply_op_in_place(out, op);
  return out;
}

Json apply_patch(const Json& doc, const Patch& patch) {
  Json out = doc;
  for (std::size_t i = 0; i < patch.size(); ++i) {
    try {
      apply_op_in_place(out, patch[i]);
    } catch (const PatchError&) {
      throw;
    } catch (const Error& e) {
      throw PatchError(e.kind(), i, e.what());
    }
  }
  return out;
}

ApplyOutcome try_apply_patch(const Json& doc, const Patch& patch) {
  try {
    return {apply_patch(doc, patch), std::nullopt};
  } catch (const PatchError& e) {
    return {doc, e};
  }
}

std::vector<PatchIssue> validate_patch(const Patch& patch, const Json& doc) {
  std::vector<PatchIssue> issues;
  Json state = doc;
  for (std::size_t i = 0; i < patch.size(); ++i) {
    Json trial = state;
    try {
      apply_op_in_place(trial, patch[i]);
      state = std::move(trial);
    } catch (const Error& e) {
      issues.push_back({i, e.kind(), e.what()});
    }
  }
  return issues;
}

}  // namespace easepatch
