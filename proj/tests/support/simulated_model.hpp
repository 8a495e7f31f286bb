#pragma once

// A scripted stand-in for a chat model, used to record the replay fixtures
// that drive the offline pipeline tests. It understands the prompts built by
// the harness: instance generation, edit-request writing, the three edit
// modes and the judge.
//
// In standard mode it reproduces the classic index-shift slip on multi-step
// list edits (indices taken from the original list); in ease mode it edits
// by key and is always right. Nothing here claims anything about real models.

#include <optional>
#include <string>

#include "easepatch/json_model.hpp"
#include "easepatch/llm_client.hpp"

namespace easepatch::testing {

class SimulatedModel : public LlmClient {
 public:
  Completion complete(const std::string& prompt, const GenerationParams& params) override;
};

/// The edit the model "means" for an instruction it knows; nullopt otherwise.
std::optional<Json> scripted_edit(const Json& scene, const std::string& instruction);

}  // namespace easepatch::testing
