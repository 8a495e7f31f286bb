#pragma once

// Evaluation of predicted patches against dataset labels: op/path F1,
// execution success and output-token accounting.

#include <array>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "easepatch/ease_codec.hpp"
#include "easepatch/json_model.hpp"
#include "easepatch/patch.hpp"

namespace easepatch {

enum class Category { Simple, Creative, Complex, ListManipulation };

inline constexpr std::array<Category, 4> kCategories{Category::Simple, Category::Creative,
                                                     Category::Complex, Category::ListManipulation};

std::string_view to_string(Category category) noexcept;
std::optional<Category> category_from_string(std::string_view name) noexcept;

struct EditExample {
  std::string id;
  Category category = Category::Simple;
  Json input;
  std::string instruction;
  Patch gold_patch;
  Json gold_output;
};

Json to_json(const EditExample& example);

/// Throws InvalidExample when fields are missing or when the gold patch does
/// not turn the input into the gold output.
EditExample example_from_json(const Json& record);

/// Line-delimited JSON, one example per non-blank line.
std::vector<EditExample> read_corpus(std::istream& in);
std::vector<EditExample> load_corpus(const std::string& path);
void write_corpus(std::ostream& out, const std::vector<EditExample>& examples);

struct OpPathSig {
  std::string op;
  std::string path;

  friend auto operator<=>(const OpPathSig&, const OpPathSig&) = default;
};

std::vector<OpPathSig> signatures(const Patch& patch);

struct F1Score {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// Multiset match on (op, path); values are ignored. Both empty scores 1,
/// exactly one empty scores 0.
F1Score op_path_f1(const std::vector<OpPathSig>& predicted, const std::vector<OpPathSig>& gold);
F1Score op_path_f1(const Patch& predicted, const Patch& gold);

/// False for a missing (unparseable) patch or one that fails to apply.
bool execution_success(const Json& doc, const std::optional<Patch>& predicted);

using TokenCounter = std::function<std::size_t(std::string_view)>;

/// Model-agnostic default: each maximal run of word characters (ASCII
/// letters, digits, '_' and any byte >= 0x80) is one token, every other
/// non-whitespace byte is one token, whitespace is free.
std::size_t word_punct_token_count(std::string_view text) noexcept;

std::size_t count_tokens(std::string_view text, const TokenCounter& counter = word_punct_token_count);

struct Prediction {
  std::optional<Patch> patch;     // nullopt: the model output did not parse
  std::optional<std::string> raw;  // verbatim model output, used for token counts
};

/// Line-delimited {"id", "patch": [...] | null, "raw"?}. A patch that fails
/// to parse becomes an absent patch rather than an error.
std::map<std::string, Prediction> read_predictions(std::istream& in);
std::map<std::string, Prediction> load_predictions(const std::string& path);
Json to_json(const std::string& id, const Prediction& prediction);

enum class EvalMode { Standard, Ease };

std::string_view to_string(EvalMode mode) noexcept;

struct EvalOptions {
  EvalMode mode = EvalMode::Standard;
  KeyPolicy policy;  // encoding used for the inputs in ease mode
  TokenCounter counter = word_punct_token_count;
  std::size_t jobs = 1;
};

struct ExampleMetrics {
  std::string id;
  Category category = Category::Simple;
  F1Score score;
  bool executed = false;
  std::size_t predicted_tokens = 0;
  std::size_t baseline_tokens = 0;
};

struct Aggregate {
  std::size_t count = 0;
  double mean_precision = 0.0;
  double mean_recall = 0.0;
  double mean_f1 = 0.0;
  double execution_success_rate = 0.0;
  std::size_t predicted_tokens = 0;
  std::size_t baseline_tokens = 0;
  double token_reduction_ratio = 0.0;  // 1 - predicted / baseline
};

struct EvalReport {
  EvalMode mode = EvalMode::Standard;
  std::vector<ExampleMetrics> per_example;
  std::map<Category, Aggregate> per_category;  // categories that occur only
  Aggregate overall;
};

/// Scores every example. Aggregates are unweighted means of the per-example
/// values (macro). In ease mode predictions are patches against
/// encode(input, policy); gold patches are lifted to key addressing and
/// keys absent from the encoded input compare as a single wildcard.
///
/// Throws MissingPrediction if an example id has no entry.
EvalReport evaluate_corpus(const std::vector<EditExample>& examples,
                           const std::map<std::string, Prediction>& predictions,
                           const EvalOptions& options = {});

/// Signatures of `patch` against `encoded`, with keys that do not exist in
/// the encoded input replaced by "*".
std::vector<OpPathSig> ease_signatures(const Json& encoded, const Patch& patch);

Json to_json(const EvalReport& report);
std::string render_table(const EvalReport& report);

struct Pricing {
  double input_per_million = 0.0;
  double output_per_million = 0.0;
};

/// Dollar cost of one request.
double request_cost(std::size_t input_tokens, std::size_t output_tokens, const Pricing& pricing);

/// Decode time estimate from time-per-output-token.
double generation_seconds(std::size_t output_tokens, double seconds_per_output_token);

}  // namespace easepatch
