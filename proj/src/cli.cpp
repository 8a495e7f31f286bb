#include "easepatch/cli.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "easepatch/diff.hpp"
#include "easepatch/ease_codec.hpp"
#include "easepatch/llm_client.hpp"
#include "easepatch/llm_harness.hpp"
#include "easepatch/metrics.hpp"
#include "easepatch/patch.hpp"
#include "easepatch/translate.hpp"

namespace easepatch {

namespace {

std::string read_text(const std::string& path) {
  if (path == "-") {
    return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Json read_json(const std::string& path) {
  try {
    return parse_json(read_text(path));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ParseError) {
      throw Error(ErrorKind::ParseError, "'" + path + "': " + e.what());
    }
    throw;
  }
}

SynthesisCounts parse_counts(const std::string& text) {
  SynthesisCounts counts;
  std::stringstream in(text);
  std::string item;
  std::size_t i = 0;
  while (std::getline(in, item, ',')) {
    if (i >= 4 || item.empty() ||
        !std::all_of(item.begin(), item.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      throw CLI::ValidationError("--counts", "expected four comma-separated counts s,c,x,l");
    }
    counts.per_category[i++] = std::stoul(item);
  }
  if (i != 4) throw CLI::ValidationError("--counts", "expected four comma-separated counts s,c,x,l");
  return counts;
}

void report_error(std::ostream& err, const Error& e) {
  err << "error kind=" << to_string(e.kind());
  if (const auto* patch_error = dynamic_cast<const PatchError*>(&e)) {
    err << " op_index=" << patch_error->op_index();
  }
  err << '\n' << e.what() << '\n';
}

struct EditSettings {
  std::string mode = "standard";
  std::size_t shots = 0;
  std::string pool;
  std::string client = "live";
  std::uint64_t seed = 0;
};

EditMode edit_mode(const std::string& name) {
  // CLI11 already restricts the choices.
  return edit_mode_from_string(name).value_or(EditMode::Standard);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
            const ClientFactory& clients) {
  auto open_client = [&](const std::string& spec) {
    return clients ? clients(spec) : make_client(spec);
  };
  CLI::App app{"Patch-based JSON editing toolkit with stable-key list encoding", "easepatch"};
  app.require_subcommand(1);

  // ease
  auto* ease = app.add_subcommand("ease", "Encode, decode or validate EASE documents");
  ease->require_subcommand(1);
  std::string ease_in;
  std::uint64_t ease_seed = 0;
  auto* ease_encode = ease->add_subcommand("encode", "Rewrite every array as a keyed object");
  ease_encode->add_option("input", ease_in, "JSON file ('-' for stdin)")->required();
  ease_encode->add_option("--seed", ease_seed, "Key generator seed");
  auto* ease_decode = ease->add_subcommand("decode", "Turn keyed lists back into arrays");
  ease_decode->add_option("input", ease_in, "EASE JSON file ('-' for stdin)")->required();
  auto* ease_validate = ease->add_subcommand("validate", "Report EASE violations");
  ease_validate->add_option("input", ease_in, "EASE JSON file ('-' for stdin)")->required();

  // patch
  auto* patch_cmd = app.add_subcommand("patch", "Apply or check RFC 6902 patches");
  patch_cmd->require_subcommand(1);
  std::string patch_doc, patch_file;
  auto* patch_apply = patch_cmd->add_subcommand("apply", "Apply a patch and print the result");
  patch_apply->add_option("doc", patch_doc, "Document")->required();
  patch_apply->add_option("patch", patch_file, "Patch")->required();
  auto* patch_validate = patch_cmd->add_subcommand("validate", "List the operations that would fail");
  patch_validate->add_option("doc", patch_doc, "Document")->required();
  patch_validate->add_option("patch", patch_file, "Patch")->required();

  // diff
  auto* diff_cmd = app.add_subcommand("diff", "Compute a patch from a to b");
  std::string diff_a, diff_b, array_strategy = "lcs";
  bool diff_ease_flag = false;
  diff_cmd->add_option("a", diff_a, "Source document")->required();
  diff_cmd->add_option("b", diff_b, "Target document")->required();
  diff_cmd->add_flag("--ease", diff_ease_flag, "Key-stable diff of two EASE documents");
  diff_cmd->add_option("--array-strategy", array_strategy, "Array diff strategy")
      ->check(CLI::IsMember({"lcs", "positional"}));

  // translate
  auto* translate_cmd = app.add_subcommand("translate", "Lower an EASE patch to a standard patch");
  std::string translate_doc, translate_patch;
  std::uint64_t translate_seed = 0;
  bool to_ease = false;
  translate_cmd->add_option("original", translate_doc, "Plain document")->required();
  translate_cmd->add_option("patch", translate_patch, "EASE patch")->required();
  translate_cmd->add_option("--seed", translate_seed, "Seed used to encode the original");
  translate_cmd->add_flag("--to-ease", to_ease, "Lift a standard patch to EASE instead");

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "Score predictions against a corpus");
  std::string eval_corpus, eval_predictions, eval_mode = "standard";
  std::uint64_t eval_seed = 0;
  std::size_t eval_jobs = 1;
  eval_cmd->add_option("corpus", eval_corpus, "Corpus (JSON lines)")->required();
  eval_cmd->add_option("predictions", eval_predictions, "Predictions (JSON lines)")->required();
  eval_cmd->add_option("--mode", eval_mode, "Prediction addressing")
      ->check(CLI::IsMember({"standard", "ease"}));
  eval_cmd->add_option("--seed", eval_seed, "Seed used to encode inputs in ease mode");
  eval_cmd->add_option("--jobs", eval_jobs, "Worker threads")->check(CLI::PositiveNumber);

  // dataset synth
  auto* dataset_cmd = app.add_subcommand("dataset", "Synthetic dataset pipeline");
  dataset_cmd->require_subcommand(1);
  auto* synth = dataset_cmd->add_subcommand("synth", "Generate a labeled corpus");
  std::string synth_schema, synth_counts, synth_client = "live", synth_out;
  std::uint64_t synth_seed = 0;
  synth->add_option("schema", synth_schema, "Schema description file")->required();
  synth->add_option("--counts", synth_counts, "Examples per category: simple,creative,complex,list")
      ->required();
  synth->add_option("--client", synth_client, "replay:<file> or live");
  synth->add_option("--seed", synth_seed, "Generation seed");
  synth->add_option("--out", synth_out, "Write the corpus here instead of stdout");

  // edit
  auto* edit_cmd = app.add_subcommand("edit", "Ask the model for one edit");
  std::string edit_doc, edit_instruction;
  EditSettings edit;
  bool lower_patch = false;
  edit_cmd->add_option("doc", edit_doc, "Document")->required();
  edit_cmd->add_option("instruction", edit_instruction, "Edit instruction")->required();
  edit_cmd->add_option("--mode", edit.mode, "Output mode")
      ->check(CLI::IsMember({"standard", "ease", "full"}));
  edit_cmd->add_option("--shots", edit.shots, "Few-shot examples");
  edit_cmd->add_option("--pool", edit.pool, "Few-shot pool corpus");
  edit_cmd->add_option("--client", edit.client, "replay:<file> or live");
  edit_cmd->add_option("--seed", edit.seed, "Seed for encoding and shot selection");
  edit_cmd->add_flag("--lower", lower_patch, "In ease mode print the equivalent standard patch");

  // predict
  auto* predict_cmd = app.add_subcommand("predict", "Run edit over every corpus example");
  std::string predict_corpus;
  EditSettings predict;
  std::size_t predict_jobs = 1;
  predict_cmd->add_option("corpus", predict_corpus, "Corpus (JSON lines)")->required();
  predict_cmd->add_option("--mode", predict.mode, "Output mode")
      ->check(CLI::IsMember({"standard", "ease", "full"}));
  predict_cmd->add_option("--shots", predict.shots, "Few-shot examples per request");
  predict_cmd->add_option("--pool", predict.pool, "Few-shot pool corpus (default: the corpus)");
  predict_cmd->add_option("--client", predict.client, "replay:<file> or live");
  predict_cmd->add_option("--seed", predict.seed, "Seed for encoding and shot selection");
  predict_cmd->add_option("--jobs", predict_jobs, "Concurrent requests")->check(CLI::PositiveNumber);

  // judge
  auto* judge_cmd = app.add_subcommand("judge", "Compare two edited documents");
  std::string judge_original, judge_w, judge_v, judge_command, judge_client = "live";
  judge_cmd->add_option("original", judge_original, "Original document")->required();
  judge_cmd->add_option("w", judge_w, "First candidate")->required();
  judge_cmd->add_option("v", judge_v, "Second candidate")->required();
  judge_cmd->add_option("command", judge_command, "Edit instruction")->required();
  judge_cmd->add_option("--client", judge_client, "replay:<file> or live");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    return 2;
  }

  try {
    if (ease_encode->parsed()) {
      out << serialize(encode(read_json(ease_in), KeyPolicy{ease_seed}));
    } else if (ease_decode->parsed()) {
      out << serialize(decode(read_json(ease_in)));
    } else if (ease_validate->parsed()) {
      const auto violations = validate_ease(read_json(ease_in));
      Json report = Json::array();
      for (const auto& v : violations) {
        Json item = Json::object();
        item["kind"] = std::string(to_string(v.kind));
        item["location"] = v.location.to_string();
        item["message"] = v.message;
        report.push_back(std::move(item));
      }
      out << serialize(report);
      return violations.empty() ? 0 : 1;
    } else if (patch_apply->parsed()) {
      const Json doc = read_json(patch_doc);
      out << serialize(apply_patch(doc, patch_from_json(read_json(patch_file))));
    } else if (patch_validate->parsed()) {
      const auto issues = validate_patch(patch_from_json(read_json(patch_file)), read_json(patch_doc));
      Json report = Json::array();
      for (const auto& issue : issues) {
        Json item = Json::object();
        item["op_index"] = issue.op_index;
        item["kind"] = std::string(to_string(issue.kind));
        item["message"] = issue.message;
        report.push_back(std::move(item));
      }
      out << serialize(report);
      return issues.empty() ? 0 : 1;
    } else if (diff_cmd->parsed()) {
      DiffOptions options;
      options.array_strategy = array_strategy == "positional" ? ArrayStrategy::Positional : ArrayStrategy::Lcs;
      options.ease_aware = diff_ease_flag;
      out << serialize(to_json(diff(read_json(diff_a), read_json(diff_b), options)));
    } else if (translate_cmd->parsed()) {
      const Json original = read_json(translate_doc);
      const Patch patch = patch_from_json(read_json(translate_patch));
      const KeyPolicy policy{translate_seed};
      out << serialize(to_json(to_ease ? standard_patch_to_ease(original, policy, patch)
                                       : ease_patch_to_standard(original, policy, patch)));
    } else if (eval_cmd->parsed()) {
      EvalOptions options;
      options.mode = eval_mode == "ease" ? EvalMode::Ease : EvalMode::Standard;
      options.policy = KeyPolicy{eval_seed};
      options.jobs = eval_jobs;
      const auto report =
          evaluate_corpus(load_corpus(eval_corpus), load_predictions(eval_predictions), options);
      out << serialize(to_json(report));
      err << render_table(report);
    } else if (synth->parsed()) {
      const auto counts = parse_counts(synth_counts);
      auto client = open_client(synth_client);
      const auto result = synthesize_dataset(*client, read_text(synth_schema), counts, synth_seed);
      for (const auto& d : result.discarded) {
        err << "discarded " << d.id << ": " << d.reason << '\n';
      }
      if (synth_out.empty()) {
        write_corpus(out, result.examples);
      } else {
        std::ofstream file(synth_out, std::ios::binary);
        if (!file) throw Error(ErrorKind::IoError, "cannot write '" + synth_out + "'");
        write_corpus(file, result.examples);
      }
      err << "synthesized " << result.examples.size() << " of " << counts.total() << " examples\n";
    } else if (edit_cmd->parsed()) {
      if (edit.shots > 0 && edit.pool.empty()) {
        throw CLI::ValidationError("--shots", "few-shot examples need --pool");
      }
      EditRequest request;
      request.doc = read_json(edit_doc);
      request.instruction = edit_instruction;
      request.mode = edit_mode(edit.mode);
      request.policy = KeyPolicy{edit.seed};
      if (edit.shots > 0) {
        request.few_shots = select_few_shots(load_corpus(edit.pool), edit_instruction, edit.shots, edit.seed);
      }
      auto client = open_client(edit.client);
      const EditResult result = generate_edit(*client, request);
      err << "usage input_tokens=" << result.usage.input_tokens
          << " output_tokens=" << result.usage.output_tokens << '\n';
      if (result.is_unsupported && !result.has_payload()) {
        err << "model flagged the command as unsupported\n";
        out << serialize(request.mode == EditMode::Full ? request.doc : Json::array());
        return 0;
      }
      if (!result.has_payload()) {
        err << "error kind=ParseError\n" << result.parse_error << '\n' << result.raw << '\n';
        return 1;
      }
      if (result.is_unsupported) err << "model flagged the command as unsupported\n";
      if (result.updated_json) {
        out << serialize(*result.updated_json);
      } else if (request.mode == EditMode::Ease && lower_patch) {
        out << serialize(to_json(ease_patch_to_standard(request.doc, request.policy, *result.patch)));
      } else {
        out << serialize(to_json(*result.patch));
      }
    } else if (predict_cmd->parsed()) {
      const auto corpus = load_corpus(predict_corpus);
      const auto pool = predict.pool.empty() ? corpus : load_corpus(predict.pool);
      const EditMode mode = edit_mode(predict.mode);
      auto client = open_client(predict.client);

      std::vector<EditRequest> requests;
      for (const auto& example : corpus) {
        EditRequest request;
        request.doc = example.input;
        request.instruction = example.instruction;
        request.mode = mode;
        request.policy = KeyPolicy{predict.seed};
        if (predict.shots > 0) {
          request.few_shots = select_few_shots(pool, example.instruction, predict.shots, predict.seed);
        }
        requests.push_back(std::move(request));
      }

      std::vector<std::optional<EditResult>> results(requests.size());
      std::vector<std::exception_ptr> failures(requests.size());
      std::atomic<std::size_t> next{0};
      auto worker = [&] {
        for (std::size_t i = next++; i < requests.size(); i = next++) {
          try {
            results[i] = generate_edit(*client, requests[i]);
          } catch (...) {
            failures[i] = std::current_exception();
          }
        }
      };
      std::vector<std::thread> threads;
      for (std::size_t t = 0; t < std::min(predict_jobs, std::max<std::size_t>(requests.size(), 1)); ++t) {
        threads.emplace_back(worker);
      }
      for (auto& thread : threads) thread.join();
      for (const auto& failure : failures) {
        if (failure) std::rethrow_exception(failure);
      }

      Usage total;
      for (std::size_t i = 0; i < corpus.size(); ++i) {
        const EditResult& result = *results[i];
        Prediction prediction;
        prediction.raw = result.raw;
        if (result.patch) {
          prediction.patch = result.patch;
        } else if (result.updated_json) {
          prediction.patch = diff(corpus[i].input, *result.updated_json);
        }
        out << serialize_compact(to_json(corpus[i].id, prediction)) << '\n';
        total.input_tokens += result.usage.input_tokens;
        total.output_tokens += result.usage.output_tokens;
      }
      err << "usage input_tokens=" << total.input_tokens << " output_tokens=" << total.output_tokens
          << '\n';
    } else if (judge_cmd->parsed()) {
      auto client = open_client(judge_client);
      const auto verdict = judge_pair(*client, read_json(judge_original), read_json(judge_w),
                                      read_json(judge_v), judge_command);
      Json answer = Json::object();
      answer["quality_answer"] = std::string(to_string(verdict));
      answer["policy"] = "both orders judged; disagreement is a tie";
      out << serialize(answer);
    }
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    return 2;
  } catch (const Error& e) {
    report_error(err, e);
    return 1;
  }
  return 0;
}

}  // namespace easepatch
