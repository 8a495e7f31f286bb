#include "support/simulated_model.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

#include "easepatch/diff.hpp"
#include "easepatch/ease_codec.hpp"
#include "easepatch/llm_harness.hpp"
#include "easepatch/metrics.hpp"
#include "easepatch/translate.hpp"

namespace easepatch::testing {

namespace {

// Only raw engine output and modulo below: std distributions differ between
// standard libraries and the recorded fixtures must not.
using Engine = std::mt19937_64;

constexpr std::array<std::string_view, 6> kWeather{"Sunny", "Rainy", "Foggy", "Overcast", "Snowy", "Windy"};
constexpr std::array<std::string_view, 5> kShotTypes{"Wide-shot", "Close-up", "Medium-shot",
                                                     "Over-the-shoulder", "Tracking-shot"};
constexpr std::array<std::string_view, 6> kSubjects{"Buddy", "Maya", "The old man", "A stray dog",
                                                    "Two kids", "The baker"};
constexpr std::array<std::string_view, 8> kActions{
    "sitting on a sidewalk",   "walking through the market", "looking at an old photo",
    "running across the bridge", "waving from a window",     "opening a creaky door",
    "feeding pigeons in the park", "laughing at the dinner table"};
constexpr std::array<std::string_view, 6> kVoiceOvers{
    "Every step brought me closer to the family.", "Some mornings feel like a second chance.",
    "The town never forgot that summer.",          "We all carry a little bit of home.",
    "Nobody expected the storm to pass so quickly.", "It was the last day before everything changed."};

template <typename Pool>
std::string pick(Engine& rng, const Pool& pool) {
  return std::string(pool[rng() % pool.size()]);
}

std::uint64_t seed_of(std::string_view text) { return std::stoull(request_hash(text), nullptr, 16); }

std::string action_sentence(Engine& rng) { return pick(rng, kSubjects) + " " + pick(rng, kActions) + "."; }

Json generate_scene(std::string_view instance_id) {
  Engine rng(seed_of(instance_id));
  Json scene = Json::object();
  scene["voice_over"] = pick(rng, kVoiceOvers);
  scene["weather"] = pick(rng, kWeather);
  Json shots = Json::array();
  const std::size_t n = 3 + rng() % 4;
  for (std::size_t i = 0; i < n; ++i) {
    Json shot = Json::object();
    shot["type"] = pick(rng, kShotTypes);
    shot["action"] = action_sentence(rng);
    shots.push_back(std::move(shot));
  }
  scene["shots"] = std::move(shots);
  Json doc = Json::object();
  doc["Scene"] = std::move(scene);
  return doc;
}

std::string write_request(const Json& scene, std::string_view category) {
  Engine rng(seed_of(serialize_compact(scene) + std::string(category)));
  const auto variant = rng() % 3;
  if (category == "simple") {
    if (variant == 0) return "Change the weather to '" + pick(rng, kWeather) + "'.";
    if (variant == 1) return "Change the voice over to '" + pick(rng, kVoiceOvers) + "'.";
    return "Make the first shot a " + pick(rng, kShotTypes) + ".";
  }
  if (category == "creative") {
    if (variant == 0) return "Add a closing shot where " + action_sentence(rng);
    if (variant == 1) return "Add an opening shot where " + action_sentence(rng);
    return "Rewrite the voice over to sound more hopeful.";
  }
  if (category == "complex") {
    if (variant == 2) return "Invent a soundtrack field for every shot.";
    if (variant == 0) return "Make the scene take place at night.";
    return "Turn every shot into a close-up and make the weather 'Foggy'.";
  }
  switch (rng() % 4) {
    case 0: return "Remove every second shot.";
    case 1: return "Remove the first shot and make the last shot a close-up.";
    case 2: return "Move the last shot to the beginning.";
    default: return "Swap the first and last shots.";
  }
}

bool starts_with(std::string_view text, std::string_view prefix) {
  return text.substr(0, prefix.size()) == prefix;
}

// Text between `open` and `close` in a quoted instruction parameter.
std::optional<std::string> quoted(const std::string& instruction, std::string_view prefix) {
  if (!starts_with(instruction, prefix) || instruction.size() < prefix.size() + 2) return std::nullopt;
  const std::string rest = instruction.substr(prefix.size());
  if (rest.substr(rest.size() - 2) != "'.") return std::nullopt;
  return rest.substr(0, rest.size() - 2);
}

std::string to_night(std::string action) {
  if (!action.empty() && action.back() == '.') action.pop_back();
  return action + " under the moonlight.";
}

// Ascending original indices: the index-shift slip.
std::optional<Patch> naive_patch(const Json& doc, const std::string& instruction) {
  const JsonPointer shots = parse_pointer("/Scene/shots");
  const std::size_t n = doc.at("Scene").at("shots").size();
  if (instruction == "Remove every second shot.") {
    Patch patch;
    for (std::size_t i = 1; i < n; i += 2) patch.push_back(PatchOp::remove(shots / std::to_string(i)));
    return patch;
  }
  if (instruction == "Remove the first shot and make the last shot a close-up.") {
    return Patch{PatchOp::remove(shots / "0"),
                 PatchOp::replace(shots / std::to_string(n - 1) / "type", "Close-up")};
  }
  return std::nullopt;
}

struct EditTask {
  EditMode mode = EditMode::Standard;
  Json doc;
  std::string instruction;
};

std::optional<EditTask> parse_edit_prompt(const std::string& prompt) {
  EditTask task;
  std::size_t matched = 0;
  for (EditMode mode : {EditMode::Standard, EditMode::Ease, EditMode::Full}) {
    const auto tpl = prompt_template(mode);
    if (starts_with(prompt, tpl) && tpl.size() > matched) {
      matched = tpl.size();
      task.mode = mode;
    }
  }
  if (matched == 0) return std::nullopt;
  constexpr std::string_view kTask = "--- Task ---\n\nInput Json:\n";
  constexpr std::string_view kCommand = "\nUser Command: ";
  const auto task_at = prompt.rfind(kTask);
  const auto command_at = prompt.find(kCommand, task_at);
  if (task_at == std::string::npos || command_at == std::string::npos) return std::nullopt;
  const auto doc_at = task_at + kTask.size();
  task.doc = parse_json(prompt.substr(doc_at, command_at - doc_at));
  const auto text_at = command_at + kCommand.size();
  task.instruction = prompt.substr(text_at, prompt.find('\n', text_at) - text_at);
  return task;
}

std::string respond_edit(const EditTask& task) {
  const std::string field = task.mode == EditMode::Full ? "updated_json" : "json_diff_patch";
  const Json plain = task.mode == EditMode::Ease ? decode(task.doc) : task.doc;
  const auto edited = scripted_edit(plain, task.instruction);

  Json answer = Json::object();
  if (!edited) {
    answer["rationale"] = "This request is not something I can apply to the scene.";
    answer[field] = nullptr;
    answer["is_unsupported"] = true;
    return serialize(answer);
  }
  answer["rationale"] = "The user asked: " + task.instruction + " I will edit only what that touches.";
  switch (task.mode) {
    case EditMode::Full:
      answer[field] = *edited;
      break;
    case EditMode::Standard:
      answer[field] = to_json(naive_patch(plain, task.instruction).value_or(diff(plain, *edited)));
      break;
    case EditMode::Ease: {
      KeyGenerator keys(KeyPolicy{seed_of(task.instruction)});
      answer[field] = to_json(lift_standard_patch(task.doc, diff(plain, *edited), keys));
      break;
    }
  }
  answer["is_unsupported"] = false;
  return serialize(answer);
}

std::string after(const std::string& text, std::string_view marker, std::string_view end) {
  const auto at = text.find(marker);
  if (at == std::string::npos) return {};
  const auto from = at + marker.size();
  return text.substr(from, text.find(end, from) - from);
}

std::string respond(const std::string& prompt) {
  if (starts_with(prompt, "Generate one realistic")) {
    return serialize(generate_scene(after(prompt, "Instance id: ", "\n")));
  }
  if (starts_with(prompt, "Write one natural language edit request")) {
    const std::string category = after(prompt, "Request type: ", " ");
    const Json scene = parse_json(after(prompt, "JSON:\n", "\n\nReturn only"));
    Json answer = Json::object();
    answer["instruction"] = write_request(scene, category);
    return serialize_compact(answer);
  }
  if (starts_with(prompt, judge_template())) {
    // Prefers the shorter candidate; ties when equal.
    const auto w = after(prompt, "w_json:\n", "\n\nv_json:");
    const auto v = after(prompt, "v_json:\n", "\n\nuser_command:");
    return w.size() == v.size() ? "tie" : (w.size() < v.size() ? "w" : "v");
  }
  if (const auto task = parse_edit_prompt(prompt)) return respond_edit(*task);
  return "I am not sure what you are asking for.";
}

}  // namespace

std::optional<Json> scripted_edit(const Json& doc, const std::string& instruction) {
  if (!doc.contains("Scene") || !doc.at("Scene").contains("shots")) return std::nullopt;
  Json out = doc;
  Json& scene = out["Scene"];
  Json& shots = scene["shots"];
  if (auto weather = quoted(instruction, "Change the weather to '")) {
    scene["weather"] = *weather;
  } else if (auto voice = quoted(instruction, "Change the voice over to '")) {
    scene["voice_over"] = *voice;
  } else if (starts_with(instruction, "Make the first shot a ") && !shots.empty()) {
    std::string type = instruction.substr(22);
    type.pop_back();
    shots[0]["type"] = type;
  } else if (starts_with(instruction, "Add a closing shot where ") ||
             starts_with(instruction, "Add an opening shot where ")) {
    const bool opening = instruction[4] == 'n';
    Json shot = Json::object();
    shot["type"] = opening ? "Close-up" : "Wide-shot";
    shot["action"] = instruction.substr(opening ? 26 : 25);
    shots.insert(opening ? shots.begin() : shots.end(), std::move(shot));
  } else if (instruction == "Rewrite the voice over to sound more hopeful.") {
    scene["voice_over"] = scene["voice_over"].get<std::string>() + " And there was hope in every street.";
  } else if (instruction == "Make the scene take place at night.") {
    scene["weather"] = "Clear night";
    for (auto& shot : shots) shot["action"] = to_night(shot["action"].get<std::string>());
  } else if (instruction == "Turn every shot into a close-up and make the weather 'Foggy'.") {
    scene["weather"] = "Foggy";
    for (auto& shot : shots) shot["type"] = "Close-up";
  } else if (instruction == "Invent a soundtrack field for every shot.") {
    for (auto& shot : shots) shot["soundtrack"] = "Soft piano";
  } else if (instruction == "Remove every second shot.") {
    Json kept = Json::array();
    for (std::size_t i = 0; i < shots.size(); i += 2) kept.push_back(shots[i]);
    shots = std::move(kept);
  } else if (instruction == "Remove the first shot and make the last shot a close-up." && shots.size() > 1) {
    shots.erase(0);
    shots[shots.size() - 1]["type"] = "Close-up";
  } else if (instruction == "Move the last shot to the beginning." && !shots.empty()) {
    Json last = shots.back();
    shots.erase(shots.size() - 1);
    shots.insert(shots.begin(), std::move(last));
  } else if (instruction == "Swap the first and last shots." && shots.size() > 1) {
    std::swap(shots[0], shots[shots.size() - 1]);
  } else {
    return std::nullopt;
  }
  return out;
}

Completion SimulatedModel::complete(const std::string& prompt, const GenerationParams&) {
  Completion completion;
  completion.text = respond(prompt);
  completion.usage.input_tokens = word_punct_token_count(prompt);
  completion.usage.output_tokens = word_punct_token_count(completion.text);
  return completion;
}

}  // namespace easepatch::testing
