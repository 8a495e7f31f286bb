#pragma once

// Prompting layer: edit requests in three modes, the pairwise judge,
// few-shot selection and the synthetic dataset pipeline.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "easepatch/ease_codec.hpp"
#include "easepatch/json_model.hpp"
#include "easepatch/llm_client.hpp"
#include "easepatch/metrics.hpp"
#include "easepatch/patch.hpp"

namespace easepatch {

enum class EditMode {
  Standard,  // index-addressed patch
  Ease,      // key-addressed patch against the encoded document
  Full,      // whole rewritten document
};

std::string_view to_string(EditMode mode) noexcept;
std::optional<EditMode> edit_mode_from_string(std::string_view name) noexcept;

/// One worked example shown to the model. The expected output is rendered
/// per mode: the gold patch, its EASE lift, or the gold document.
struct FewShot {
  Json input;
  std::string instruction;
  Patch gold_patch;
  Json gold_output;
};

struct EditRequest {
  Json doc;  // always the plain document; ease mode encodes it for the prompt
  std::string instruction;
  EditMode mode = EditMode::Standard;
  std::vector<FewShot> few_shots;
  KeyPolicy policy;
};

struct EditResult {
  std::string rationale;
  std::optional<Patch> patch;        // standard and ease modes
  std::optional<Json> updated_json;  // full mode
  bool is_unsupported = false;
  std::string raw;
  Usage usage;
  std::string parse_error;  // empty when the payload parsed

  bool has_payload() const noexcept { return patch.has_value() || updated_json.has_value(); }
};

/// Instruction template text for a mode, exactly as shipped in assets/prompts.
std::string_view prompt_template(EditMode mode) noexcept;
std::string_view judge_template() noexcept;

/// Layout:
///
///   <template>
///
///   --- Examples ---            (only with few-shots)
///   Example N:
///   Input Json:
///   <json>
///   User Command: <text>
///   Output:
///   <expected output object, one line>
///
///   --- Task ---
///   Input Json:
///   <json>
///   User Command: <text>
///
///   <one-line answer format instruction>
///
/// Documents are serialized with two-space indentation.
std::string build_prompt(const EditRequest& request);

/// Accepts a JSON object with the output fields, or the first fenced code
/// block that holds such an object. Never throws: failures leave the payload
/// empty and set parse_error.
EditResult parse_edit_response(std::string_view text, EditMode mode);

/// Only transport failures propagate.
EditResult generate_edit(LlmClient& client, const EditRequest& request,
                         const GenerationParams& params = {});

enum class JudgeVerdict { W, V, Tie };

std::string_view to_string(JudgeVerdict verdict) noexcept;

std::string build_judge_prompt(const Json& original, const Json& w, const Json& v,
                               std::string_view command);

/// Accepts "w", "v", "tie" (case-insensitive, optional quotes or trailing
/// period), "quality_answer: <x>" or {"quality_answer": "<x>"}. Anything else
/// throws Error(UnparseableVerdict).
JudgeVerdict parse_verdict(std::string_view text);

JudgeVerdict judge_once(LlmClient& client, const Json& original, const Json& w, const Json& v,
                        std::string_view command, const GenerationParams& params = {});

/// Judges (w, v) and then (v, w); the swapped answer is mapped back and any
/// disagreement becomes a tie.
JudgeVerdict judge_pair(LlmClient& client, const Json& original, const Json& w, const Json& v,
                        std::string_view command, const GenerationParams& params = {});

/// Category-stratified selection: each category's examples are shuffled with
/// the seed, then categories are visited round-robin in the fixed order
/// simple, creative, complex, list_manipulation. Pool entries whose
/// instruction equals `instruction` are excluded.
///
/// Throws Error(PoolTooSmall) if fewer than k candidates remain.
std::vector<FewShot> select_few_shots(const std::vector<EditExample>& pool,
                                      std::string_view instruction, std::size_t k,
                                      std::uint64_t seed);

FewShot to_few_shot(const EditExample& example);

struct SynthesisCounts {
  std::array<std::size_t, 4> per_category{};  // indexed like kCategories

  std::size_t total() const noexcept;
};

struct Discarded {
  std::string id;
  std::string reason;
};

struct SynthesisResult {
  std::vector<EditExample> examples;
  std::vector<Discarded> discarded;
};

/// Four steps per example: generate an instance of the schema, ask for an
/// edit request of the target category, ask for the full rewrite, then label
/// it with diff(instance, rewrite). Rewrites that are unsupported,
/// unparseable or change the document's shape are discarded.
///
/// Throws TransportError, or SchemaViolation when a generated instance does
/// not fit the schema description.
SynthesisResult synthesize_dataset(LlmClient& client, std::string_view schema_description,
                                   const SynthesisCounts& counts, std::uint64_t seed,
                                   const GenerationParams& params = {});

std::string build_instance_prompt(std::string_view schema_description, std::uint64_t seed,
                                  std::size_t index);
std::string build_request_prompt(const Json& instance, Category category);

/// Shape check used for schema drift: same JSON types (null matches
/// anything, numbers match numbers), same object keys, and every element
/// of a rewritten array matches some element of the original array.
bool same_shape(const Json& original, const Json& rewritten);

/// Step-one check. A JSON Schema description requires its "required" keys;
/// a JSON skeleton requires its top-level keys; free text requires an object.
bool fits_schema(const Json& instance, std::string_view schema_description);

}  // namespace easepatch
