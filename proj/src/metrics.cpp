#include "easepatch/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <exception>
#include <fstream>
#include <future>
#include <istream>
#include <ostream>
#include <sstream>

#include "easepatch/translate.hpp"

namespace easepatch {

std::string_view to_string(Category category) noexcept {
  switch (category) {
    case Category::Simple: return "simple";
    case Category::Creative: return "creative";
    case Category::Complex: return "complex";
    case Category::ListManipulation: return "list_manipulation";
  }
  return "unknown";
}

std::optional<Category> category_from_string(std::string_view name) noexcept {
  for (auto category : kCategories) {
    if (to_string(category) == name) return category;
  }
  return std::nullopt;
}

std::string_view to_string(EvalMode mode) noexcept {
  return mode == EvalMode::Ease ? "ease" : "standard";
}

Json to_json(const EditExample& example) {
  Json out = Json::object();
  out["id"] = example.id;
  out["category"] = std::string(to_string(example.category));
  out["input"] = example.input;
  out["instruction"] = example.instruction;
  out["gold_patch"] = to_json(example.gold_patch);
  out["gold_output"] = example.gold_output;
  return out;
}

namespace {

const Json& required(const Json& record, const char* field, const std::string& id) {
  auto it = record.find(field);
  if (it == record.end()) {
    throw Error(ErrorKind::InvalidExample, "example '" + id + "': missing '" + field + "'");
  }
  return *it;
}

}  // namespace

EditExample example_from_json(const Json& record) {
  if (!record.is_object()) throw Error(ErrorKind::InvalidExample, "example must be an object");
  EditExample example;
  const Json& id = required(record, "id", "?");
  if (!id.is_string()) throw Error(ErrorKind::InvalidExample, "example id must be a string");
  example.id = id.get<std::string>();

  const Json& category = required(record, "category", example.id);
  const auto parsed = category.is_string() ? category_from_string(category.get<std::string>())
                                           : std::nullopt;
  if (!parsed) {
    throw Error(ErrorKind::InvalidExample, "example '" + example.id + "': unknown category");
  }
  example.category = *parsed;
  example.input = required(record, "input", example.id);
  const Json& instruction = required(record, "instruction", example.id);
  if (!instruction.is_string()) {
    throw Error(ErrorKind::InvalidExample, "example '" + example.id + "': instruction must be a string");
  }
  example.instruction = instruction.get<std::string>();
  example.gold_output = required(record, "gold_output", example.id);
  try {
    example.gold_patch = patch_from_json(required(record, "gold_patch", example.id));
    if (!json_equal(apply_patch(example.input, example.gold_patch), example.gold_output)) {
      throw Error(ErrorKind::InvalidExample, "gold patch does not produce gold output");
    }
  } catch (const Error& e) {
    throw Error(ErrorKind::InvalidExample, "example '" + example.id + "': " + e.what());
  }
  return example;
}

std::vector<EditExample> read_corpus(std::istream& in) {
  std::vector<EditExample> examples;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    examples.push_back(example_from_json(parse_json(line)));
  }
  return examples;
}

std::vector<EditExample> load_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open corpus '" + path + "'");
  return read_corpus(in);
}

void write_corpus(std::ostream& out, const std::vector<EditExample>& examples) {
  for (const auto& example : examples) out << serialize_compact(to_json(example)) << '\n';
}

std::vector<OpPathSig> signatures(const Patch& patch) {
  std::vector<OpPathSig> out;
  out.reserve(patch.size());
  for (const auto& op : patch) out.push_back({std::string(to_string(op.op)), op.path.to_string()});
  return out;
}

F1Score op_path_f1(const std::vector<OpPathSig>& predicted, const std::vector<OpPathSig>& gold) {
  if (predicted.empty() && gold.empty()) return {1.0, 1.0, 1.0};
  if (predicted.empty() || gold.empty()) return {};

  auto p = predicted;
  auto g = gold;
  std::sort(p.begin(), p.end());
  std::sort(g.begin(), g.end());
  std::size_t matched = 0;
  for (auto pi = p.begin(), gi = g.begin(); pi != p.end() && gi != g.end();) {
    if (*pi < *gi) {
      ++pi;
    } else if (*gi < *pi) {
      ++gi;
    } else {
      ++matched;
      ++pi;
      ++gi;
    }
  }
  F1Score score;
  score.precision = static_cast<double>(matched) / static_cast<double>(p.size());
  score.recall = static_cast<double>(matched) / static_cast<double>(g.size());
  if (matched > 0) {
    score.f1 = 2.0 * score.precision * score.recall / (score.precision + score.recall);
  }
  return score;
}

F1Score op_path_f1(const Patch& predicted, const Patch& gold) {
  return op_path_f1(signatures(predicted), signatures(gold));
}

bool execution_success(const Json& doc, const std::optional<Patch>& predicted) {
  return predicted.has_value() && try_apply_patch(doc, *predicted).ok();
}

std::size_t word_punct_token_count(std::string_view text) noexcept {
  auto is_word = [](unsigned char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
           c == '_' || c >= 0x80;
  };
  auto is_space = [](unsigned char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
  };
  std::size_t count = 0;
  bool in_word = false;
  for (unsigned char c : text) {
    if (is_word(c)) {
      if (!in_word) ++count;
      in_word = true;
    } else {
      in_word = false;
      if (!is_space(c)) ++count;
    }
  }
  return count;
}

std::size_t count_tokens(std::string_view text, const TokenCounter& counter) {
  return counter(text);
}

std::map<std::string, Prediction> read_predictions(std::istream& in) {
  std::map<std::string, Prediction> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const Json record = parse_json(line);
    if (!record.is_object() || !record.contains("id") || !record["id"].is_string()) {
      throw Error(ErrorKind::InvalidField, "prediction record needs a string 'id'");
    }
    Prediction prediction;
    if (auto it = record.find("patch"); it != record.end() && !it->is_null()) {
      try {
        prediction.patch = patch_from_json(*it);
      } catch (const Error&) {
        prediction.patch.reset();
      }
    }
    if (auto it = record.find("raw"); it != record.end() && it->is_string()) {
      prediction.raw = it->get<std::string>();
    }
    out[record["id"].get<std::string>()] = std::move(prediction);
  }
  return out;
}

std::map<std::string, Prediction> load_predictions(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open predictions '" + path + "'");
  return read_predictions(in);
}

Json to_json(const std::string& id, const Prediction& prediction) {
  Json out = Json::object();
  out["id"] = id;
  out["patch"] = prediction.patch ? to_json(*prediction.patch) : Json();
  if (prediction.raw) out["raw"] = *prediction.raw;
  return out;
}

std::vector<OpPathSig> ease_signatures(const Json& encoded, const Patch& patch) {
  std::vector<OpPathSig> out;
  out.reserve(patch.size());
  for (const auto& op : patch) {
    const Json* current = &encoded;
    std::vector<std::string> tokens;
    for (const auto& token : op.path.tokens()) {
      if (current == nullptr) {
        tokens.push_back(token);
        continue;
      }
      const bool list = is_ease_list(*current);
      const Json* next = nullptr;
      if (current->is_object() && token != kOrderKey) {
        auto it = current->find(token);
        if (it != current->end()) next = &*it;
      } else if (current->is_array()) {
        next = find(*current, JsonPointer({token}));
      }
      tokens.push_back(list && next == nullptr && token != kOrderKey ? "*" : token);
      current = next;
    }
    out.push_back({std::string(to_string(op.op)), JsonPointer(std::move(tokens)).to_string()});
  }
  return out;
}

namespace {

ExampleMetrics score_example(const EditExample& example, const Prediction& prediction,
                             const EvalOptions& options) {
  ExampleMetrics metrics;
  metrics.id = example.id;
  metrics.category = example.category;

  if (options.mode == EvalMode::Standard) {
    if (prediction.patch) metrics.score = op_path_f1(*prediction.patch, example.gold_patch);
    metrics.executed = execution_success(example.input, prediction.patch);
  } else {
    const Json encoded = encode(example.input, options.policy);
    if (prediction.patch) {
      const Patch gold = standard_patch_to_ease(example.input, options.policy, example.gold_patch);
      metrics.score = op_path_f1(ease_signatures(encoded, *prediction.patch),
                                 ease_signatures(encoded, gold));
      const auto outcome = try_apply_patch(encoded, *prediction.patch);
      metrics.executed = outcome.ok() && validate_ease(outcome.doc).empty();
    }
  }

  const TokenCounter& counter = options.counter ? options.counter : TokenCounter(word_punct_token_count);
  if (prediction.raw) {
    metrics.predicted_tokens = counter(*prediction.raw);
  } else if (prediction.patch) {
    metrics.predicted_tokens = counter(serialize_compact(to_json(*prediction.patch)));
  }
  metrics.baseline_tokens = counter(serialize_compact(example.gold_output));
  return metrics;
}

Aggregate aggregate(const std::vector<const ExampleMetrics*>& rows) {
  Aggregate out;
  out.count = rows.size();
  if (rows.empty()) return out;
  std::size_t executed = 0;
  for (const auto* row : rows) {
    out.mean_precision += row->score.precision;
    out.mean_recall += row->score.recall;
    out.mean_f1 += row->score.f1;
    executed += row->executed ? 1 : 0;
    out.predicted_tokens += row->predicted_tokens;
    out.baseline_tokens += row->baseline_tokens;
  }
  const auto n = static_cast<double>(rows.size());
  out.mean_precision /= n;
  out.mean_recall /= n;
  out.mean_f1 /= n;
  out.execution_success_rate = static_cast<double>(executed) / n;
  if (out.baseline_tokens > 0) {
    out.token_reduction_ratio = 1.0 - static_cast<double>(out.predicted_tokens) /
                                          static_cast<double>(out.baseline_tokens);
  }
  return out;
}

}  // namespace

EvalReport evaluate_corpus(const std::vector<EditExample>& examples,
                           const std::map<std::string, Prediction>& predictions,
                           const EvalOptions& options) {
  std::vector<const Prediction*> matched;
  matched.reserve(examples.size());
  for (const auto& example : examples) {
    auto it = predictions.find(example.id);
    if (it == predictions.end()) {
      throw Error(ErrorKind::MissingPrediction, "no prediction for example '" + example.id + "'");
    }
    matched.push_back(&it->second);
  }

  EvalReport report;
  report.mode = options.mode;
  report.per_example.resize(examples.size());

  const std::size_t jobs = std::clamp<std::size_t>(options.jobs, 1, std::max<std::size_t>(1, examples.size()));
  const std::size_t chunk = (examples.size() + jobs - 1) / std::max<std::size_t>(jobs, 1);
  std::vector<std::future<void>> workers;
  for (std::size_t begin = 0; begin < examples.size(); begin += chunk) {
    const std::size_t end = std::min(examples.size(), begin + chunk);
    workers.push_back(std::async(std::launch::async, [&, begin, end] {
      for (std::size_t i = begin; i < end; ++i) {
        report.per_example[i] = score_example(examples[i], *matched[i], options);
      }
    }));
  }
  for (auto& worker : workers) worker.get();

  std::vector<const ExampleMetrics*> all;
  std::map<Category, std::vector<const ExampleMetrics*>> by_category;
  for (const auto& row : report.per_example) {
    all.push_back(&row);
    by_category[row.category].push_back(&row);
  }
  report.overall = aggregate(all);
  for (const auto& [category, rows] : by_category) report.per_category[category] = aggregate(rows);
  return report;
}

namespace {

Json to_json(const Aggregate& a) {
  Json out = Json::object();
  out["count"] = a.count;
  out["mean_precision"] = a.mean_precision;
  out["mean_recall"] = a.mean_recall;
  out["mean_f1"] = a.mean_f1;
  out["execution_success_rate"] = a.execution_success_rate;
  out["predicted_tokens"] = a.predicted_tokens;
  out["baseline_tokens"] = a.baseline_tokens;
  out["token_reduction_ratio"] = a.token_reduction_ratio;
  return out;
}

}  // namespace

Json to_json(const EvalReport& report) {
  Json out = Json::object();
  Json metadata = Json::object();
  metadata["mode"] = std::string(to_string(report.mode));
  metadata["aggregation"] = "macro";
  metadata["f1_matching"] = "multiset of (op, path); values ignored";
  metadata["baseline_tokens"] = "gold output document, compact serialization";
  metadata["gold_path_mapping"] =
      report.mode == EvalMode::Ease
          ? "gold patch lifted to key addressing; keys absent from the encoded input compare as '*'"
          : "none";
  out["metadata"] = std::move(metadata);

  Json rows = Json::array();
  for (const auto& row : report.per_example) {
    Json r = Json::object();
    r["id"] = row.id;
    r["category"] = std::string(to_string(row.category));
    r["precision"] = row.score.precision;
    r["recall"] = row.score.recall;
    r["f1"] = row.score.f1;
    r["executed"] = row.executed;
    r["predicted_tokens"] = row.predicted_tokens;
    r["baseline_tokens"] = row.baseline_tokens;
    rows.push_back(std::move(r));
  }
  out["per_example"] = std::move(rows);

  Json aggregate = Json::object();
  aggregate["overall"] = to_json(report.overall);
  Json categories = Json::object();
  for (const auto& [category, agg] : report.per_category) {
    categories[std::string(to_string(category))] = to_json(agg);
  }
  aggregate["per_category"] = std::move(categories);
  out["aggregate"] = std::move(aggregate);
  return out;
}

std::string render_table(const EvalReport& report) {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof line, "%-18s %5s %9s %9s %9s %9s %10s %10s %9s\n", "category", "n",
                "precision", "recall", "f1", "exec", "out_tok", "base_tok", "tok_red");
  out << line;
  auto row = [&](std::string_view name, const Aggregate& a) {
    std::snprintf(line, sizeof line, "%-18.*s %5zu %9.4f %9.4f %9.4f %9.4f %10zu %10zu %9.4f\n",
                  static_cast<int>(name.size()), name.data(), a.count, a.mean_precision,
                  a.mean_recall, a.mean_f1, a.execution_success_rate, a.predicted_tokens,
                  a.baseline_tokens, a.token_reduction_ratio);
    out << line;
  };
  for (const auto& [category, agg] : report.per_category) row(to_string(category), agg);
  row("overall", report.overall);
  out << "mode: " << to_string(report.mode) << ", aggregation: macro\n";
  return out.str();
}

double request_cost(std::size_t input_tokens, std::size_t output_tokens, const Pricing& pricing) {
  return (static_cast<double>(input_tokens) * pricing.input_per_million +
          static_cast<double>(output_tokens) * pricing.output_per_million) /
         1e6;
}

double generation_seconds(std::size_t output_tokens, double seconds_per_output_token) {
  return static_cast<double>(output_tokens) * seconds_per_output_token;
}

}  // namespace easepatch
