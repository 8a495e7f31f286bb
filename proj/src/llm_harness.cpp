#include "easepatch/llm_harness.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <random>
#include <sstream>

#include "easepatch/diff.hpp"
#include "easepatch/prompt_assets.hpp"
#include "easepatch/translate.hpp"

namespace easepatch {

std::string_view to_string(EditMode mode) noexcept {
  switch (mode) {
    case EditMode::Standard: return "standard";
    case EditMode::Ease: return "ease";
    case EditMode::Full: return "full";
  }
  return "unknown";
}

std::optional<EditMode> edit_mode_from_string(std::string_view name) noexcept {
  for (auto mode : {EditMode::Standard, EditMode::Ease, EditMode::Full}) {
    if (to_string(mode) == name) return mode;
  }
  return std::nullopt;
}

std::string_view prompt_template(EditMode mode) noexcept {
  switch (mode) {
    case EditMode::Standard: return assets::kStandardTemplate;
    case EditMode::Ease: return assets::kEaseTemplate;
    case EditMode::Full: return assets::kFullTemplate;
  }
  return {};
}

std::string_view judge_template() noexcept { return assets::kJudgeTemplate; }

namespace {

std::string pretty(const Json& value) { return value.dump(2); }

std::string trim(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t\r\n");
  return std::string(text.substr(first, last - first + 1));
}

std::string lower(std::string text) {
  std::transform(text.begin(), text.end(), text.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return text;
}

const char* payload_field(EditMode mode) {
  return mode == EditMode::Full ? "updated_json" : "json_diff_patch";
}

Json expected_output(const FewShot& shot, EditMode mode, const KeyPolicy& policy) {
  Json out = Json::object();
  switch (mode) {
    case EditMode::Standard:
      out["json_diff_patch"] = to_json(shot.gold_patch);
      break;
    case EditMode::Ease:
      out["json_diff_patch"] = to_json(standard_patch_to_ease(shot.input, policy, shot.gold_patch));
      break;
    case EditMode::Full:
      out["updated_json"] = shot.gold_output;
      break;
  }
  out["is_unsupported"] = false;
  return out;
}

Json prompt_doc(const Json& doc, EditMode mode, const KeyPolicy& policy) {
  return mode == EditMode::Ease ? encode(doc, policy) : doc;
}

// Whole text as an object, else the first fenced block holding an object.
std::optional<Json> extract_object(std::string_view text) {
  try {
    Json whole = Json::parse(trim(text));
    if (whole.is_object()) return whole;
  } catch (const Json::exception&) {
  }
  std::size_t search = 0;
  while (true) {
    const auto open = text.find("```", search);
    if (open == std::string_view::npos) return std::nullopt;
    const auto body_start = text.find('\n', open);
    if (body_start == std::string_view::npos) return std::nullopt;
    const auto close = text.find("```", body_start);
    if (close == std::string_view::npos) return std::nullopt;
    try {
      Json block = Json::parse(text.substr(body_start + 1, close - body_start - 1));
      if (block.is_object()) return block;
    } catch (const Json::exception&) {
    }
    search = close + 3;
  }
}

std::optional<bool> read_flag(const Json& value) {
  if (value.is_boolean()) return value.get<bool>();
  if (value.is_string()) {
    const auto text = lower(trim(value.get<std::string>()));
    if (text == "true") return true;
    if (text == "false") return false;
  }
  return std::nullopt;
}

}  // namespace

std::string build_prompt(const EditRequest& request) {
  std::ostringstream out;
  out << prompt_template(request.mode) << '\n';
  if (!request.few_shots.empty()) {
    out << "--- Examples ---\n\n";
    for (std::size_t i = 0; i < request.few_shots.size(); ++i) {
      const auto& shot = request.few_shots[i];
      out << "Example " << (i + 1) << ":\n"
          << "Input Json:\n"
          << pretty(prompt_doc(shot.input, request.mode, request.policy)) << '\n'
          << "User Command: " << shot.instruction << '\n'
          << "Output:\n"
          << serialize_compact(expected_output(shot, request.mode, request.policy)) << "\n\n";
    }
  }
  out << "--- Task ---\n\n"
      << "Input Json:\n"
      << pretty(prompt_doc(request.doc, request.mode, request.policy)) << '\n'
      << "User Command: " << request.instruction << "\n\n"
      << "Respond with a single JSON object with the fields \"rationale\", \""
      << payload_field(request.mode) << "\" and \"is_unsupported\".\n";
  return out.str();
}

EditResult parse_edit_response(std::string_view text, EditMode mode) {
  EditResult result;
  result.raw = std::string(text);
  const auto object = extract_object(text);
  if (!object) {
    result.parse_error = "no JSON object with output fields found";
    return result;
  }
  if (auto it = object->find("rationale"); it != object->end() && it->is_string()) {
    result.rationale = it->get<std::string>();
  }
  if (auto it = object->find("is_unsupported"); it != object->end()) {
    result.is_unsupported = read_flag(*it).value_or(false);
  }

  const char* field = payload_field(mode);
  auto it = object->find(field);
  if (it == object->end() || it->is_null()) {
    if (!result.is_unsupported) result.parse_error = std::string("missing '") + field + "'";
    return result;
  }
  Json payload = *it;
  if (payload.is_string()) {
    try {
      payload = Json::parse(payload.get<std::string>());
    } catch (const Json::exception&) {
      result.parse_error = std::string("'") + field + "' holds a string that is not JSON";
      return result;
    }
  }
  if (mode == EditMode::Full) {
    result.updated_json = std::move(payload);
    return result;
  }
  try {
    result.patch = patch_from_json(payload);
  } catch (const Error& e) {
    result.parse_error = e.what();
  }
  return result;
}

EditResult generate_edit(LlmClient& client, const EditRequest& request,
                         const GenerationParams& params) {
  const Completion completion = client.complete(build_prompt(request), params);
  EditResult result = parse_edit_response(completion.text, request.mode);
  result.usage = completion.usage;
  return result;
}

std::string_view to_string(JudgeVerdict verdict) noexcept {
  switch (verdict) {
    case JudgeVerdict::W: return "w";
    case JudgeVerdict::V: return "v";
    case JudgeVerdict::Tie: return "tie";
  }
  return "unknown";
}

std::string build_judge_prompt(const Json& original, const Json& w, const Json& v,
                               std::string_view command) {
  std::ostringstream out;
  out << judge_template() << '\n'
      << "--- Task ---\n\n"
      << "original_json:\n" << pretty(original) << "\n\n"
      << "w_json:\n" << pretty(w) << "\n\n"
      << "v_json:\n" << pretty(v) << "\n\n"
      << "user_command: " << command << "\n\n"
      << "Respond with the quality_answer only: w, v or tie.\n";
  return out.str();
}

JudgeVerdict parse_verdict(std::string_view text) {
  std::string answer = trim(text);
  try {
    const Json object = Json::parse(answer);
    if (object.is_object() && object.contains("quality_answer") &&
        object["quality_answer"].is_string()) {
      answer = object["quality_answer"].get<std::string>();
    }
  } catch (const Json::exception&) {
  }
  answer = lower(trim(answer));
  constexpr std::string_view label = "quality_answer:";
  if (answer.rfind(label, 0) == 0) answer = trim(answer.substr(label.size()));
  while (!answer.empty() && (answer.front() == '"' || answer.front() == '\'' || answer.front() == '`')) {
    answer.erase(answer.begin());
  }
  while (!answer.empty() &&
         (answer.back() == '"' || answer.back() == '\'' || answer.back() == '`' || answer.back() == '.')) {
    answer.pop_back();
  }
  if (answer == "w") return JudgeVerdict::W;
  if (answer == "v") return JudgeVerdict::V;
  if (answer == "tie") return JudgeVerdict::Tie;
  throw Error(ErrorKind::UnparseableVerdict, "unrecognized judge answer: '" + trim(text) + "'");
}

JudgeVerdict judge_once(LlmClient& client, const Json& original, const Json& w, const Json& v,
                        std::string_view command, const GenerationParams& params) {
  return parse_verdict(client.complete(build_judge_prompt(original, w, v, command), params).text);
}

JudgeVerdict judge_pair(LlmClient& client, const Json& original, const Json& w, const Json& v,
                        std::string_view command, const GenerationParams& params) {
  const JudgeVerdict first = judge_once(client, original, w, v, command, params);
  JudgeVerdict second = judge_once(client, original, v, w, command, params);
  if (second == JudgeVerdict::W) {
    second = JudgeVerdict::V;
  } else if (second == JudgeVerdict::V) {
    second = JudgeVerdict::W;
  }
  return first == second ? first : JudgeVerdict::Tie;
}

FewShot to_few_shot(const EditExample& example) {
  return {example.input, example.instruction, example.gold_patch, example.gold_output};
}

std::vector<FewShot> select_few_shots(const std::vector<EditExample>& pool,
                                      std::string_view instruction, std::size_t k,
                                      std::uint64_t seed) {
  std::map<Category, std::vector<const EditExample*>> groups;
  std::size_t candidates = 0;
  for (const auto& example : pool) {
    if (example.instruction == instruction) continue;
    groups[example.category].push_back(&example);
    ++candidates;
  }
  if (k > candidates) {
    throw Error(ErrorKind::PoolTooSmall, "requested " + std::to_string(k) + " shots but only " +
                                             std::to_string(candidates) + " candidates available");
  }

  std::mt19937_64 rng(seed);
  for (auto category : kCategories) {
    auto& group = groups[category];
    for (std::size_t i = group.size(); i > 1; --i) {
      std::swap(group[i - 1], group[rng() % i]);
    }
  }

  std::vector<FewShot> shots;
  std::array<std::size_t, 4> cursor{};
  while (shots.size() < k) {
    for (std::size_t c = 0; c < kCategories.size() && shots.size() < k; ++c) {
      const auto& group = groups[kCategories[c]];
      if (cursor[c] < group.size()) shots.push_back(to_few_shot(*group[cursor[c]++]));
    }
  }
  return shots;
}

std::size_t SynthesisCounts::total() const noexcept {
  std::size_t n = 0;
  for (auto c : per_category) n += c;
  return n;
}

namespace {

std::string_view category_brief(Category category) {
  switch (category) {
    case Category::Simple:
      return "change exactly one field and leave everything else untouched";
    case Category::Creative:
      return "introduce new content that does not exist in the JSON yet";
    case Category::Complex:
      return "change several related parts of the JSON so the result stays consistent";
    case Category::ListManipulation:
      return "reorder, filter, insert into or update the items of a list";
  }
  return "";
}

bool same_type(const Json& a, const Json& b) {
  if (a.is_null() || b.is_null()) return true;
  if (a.is_number() && b.is_number()) return true;
  return a.type() == b.type();
}

std::string extract_instruction(std::string_view text) {
  if (const auto object = extract_object(text)) {
    for (const char* key : {"instruction", "request", "edit_request"}) {
      if (auto it = object->find(key); it != object->end() && it->is_string()) {
        return trim(it->get<std::string>());
      }
    }
  }
  std::string out = trim(text);
  if (out.size() >= 2 && out.front() == '"' && out.back() == '"') out = trim(out.substr(1, out.size() - 2));
  return out;
}

}  // namespace

bool same_shape(const Json& original, const Json& rewritten) {
  if (!same_type(original, rewritten)) return false;
  if (original.is_object() && rewritten.is_object()) {
    if (original.size() != rewritten.size()) return false;
    for (const auto& [key, value] : original.items()) {
      auto it = rewritten.find(key);
      if (it == rewritten.end() || !same_shape(value, *it)) return false;
    }
    return true;
  }
  if (original.is_array() && rewritten.is_array() && !original.empty()) {
    return std::all_of(rewritten.begin(), rewritten.end(), [&](const Json& item) {
      return std::any_of(original.begin(), original.end(),
                         [&](const Json& model) { return same_shape(model, item); });
    });
  }
  return true;
}

bool fits_schema(const Json& instance, std::string_view schema_description) {
  if (!instance.is_object()) return false;
  Json schema;
  try {
    schema = Json::parse(schema_description);
  } catch (const Json::exception&) {
    return true;
  }
  if (!schema.is_object()) return true;
  if (schema.contains("properties") || schema.contains("$schema")) {
    if (auto required = schema.find("required"); required != schema.end() && required->is_array()) {
      for (const auto& key : *required) {
        if (key.is_string() && !instance.contains(key.get<std::string>())) return false;
      }
    }
    return true;
  }
  for (const auto& [key, value] : schema.items()) {
    if (!instance.contains(key)) return false;
  }
  return true;
}

std::string build_instance_prompt(std::string_view schema_description, std::uint64_t seed,
                                  std::size_t index) {
  std::ostringstream out;
  out << "Generate one realistic and diverse JSON instance that follows the schema below.\n"
      << "Vary names, values and list lengths between instances.\n"
      << "Instance id: " << seed << '-' << index << "\n\n"
      << "Schema:\n" << trim(schema_description) << "\n\n"
      << "Return only the JSON instance.\n";
  return out.str();
}

std::string build_request_prompt(const Json& instance, Category category) {
  std::ostringstream out;
  out << "Write one natural language edit request that a user of a video production app might\n"
      << "give for the JSON below.\n"
      << "Request type: " << to_string(category) << " (" << category_brief(category) << ").\n\n"
      << "JSON:\n" << pretty(instance) << "\n\n"
      << "Return only the request text.\n";
  return out.str();
}

SynthesisResult synthesize_dataset(LlmClient& client, std::string_view schema_description,
                                   const SynthesisCounts& counts, std::uint64_t seed,
                                   const GenerationParams& params) {
  SynthesisResult result;
  std::size_t index = 0;
  for (std::size_t c = 0; c < kCategories.size(); ++c) {
    const Category category = kCategories[c];
    for (std::size_t n = 0; n < counts.per_category[c]; ++n, ++index) {
      char id[32];
      std::snprintf(id, sizeof id, "ex-%04zu", index + 1);

      const auto instance_text =
          client.complete(build_instance_prompt(schema_description, seed, index), params).text;
      const auto instance = extract_object(instance_text);
      if (!instance || !fits_schema(*instance, schema_description)) {
        throw Error(ErrorKind::SchemaViolation,
                    std::string(id) + ": generated instance does not fit the schema");
      }

      const auto instruction =
          extract_instruction(client.complete(build_request_prompt(*instance, category), params).text);
      if (instruction.empty()) {
        result.discarded.push_back({id, "empty edit request"});
        continue;
      }

      EditRequest rewrite;
      rewrite.doc = *instance;
      rewrite.instruction = instruction;
      rewrite.mode = EditMode::Full;
      const EditResult rewritten = generate_edit(client, rewrite, params);
      if (rewritten.is_unsupported) {
        result.discarded.push_back({id, "rewrite flagged as unsupported"});
        continue;
      }
      if (!rewritten.updated_json) {
        result.discarded.push_back({id, "rewrite did not parse: " + rewritten.parse_error});
        continue;
      }
      if (!same_shape(*instance, *rewritten.updated_json)) {
        result.discarded.push_back({id, "schema drift in rewrite"});
        continue;
      }

      EditExample example;
      example.id = id;
      example.category = category;
      example.input = *instance;
      example.instruction = instruction;
      example.gold_output = *rewritten.updated_json;
      example.gold_patch = diff(example.input, example.gold_output);
      const auto check = try_apply_patch(example.input, example.gold_patch);
      if (!check.ok() || !json_equal(check.doc, example.gold_output)) {
        result.discarded.push_back({id, "gold patch does not reproduce the rewrite"});
        continue;
      }
      result.examples.push_back(std::move(example));
    }
  }
  return result;
}

}  // namespace easepatch
