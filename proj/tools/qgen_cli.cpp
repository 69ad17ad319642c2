// qgen: annotate, train, generate, eval and serve from one binary.

#include <cstdio>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <httplib.h>
#include <nlohmann/json.hpp>

#include "qgen/annotate.hpp"
#include "qgen/config.hpp"
#include "qgen/generate.hpp"
#include "qgen/lexicon.hpp"
#include "qgen/metrics.hpp"
#include "qgen/rules.hpp"
#include "qgen/score.hpp"
#include "qgen/service.hpp"

namespace {

using namespace qgen;

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitInput = 2;

struct Common {
  std::string config_path;
  std::string data_dir;
  std::vector<std::string> fixtures;
};

bool is_tsv(const std::string& path) { return path.ends_with(".tsv"); }

Toolkit toolkit_for(const Common& common, const Config& config) {
  ProviderConfig pc;
  pc.data_dir = common.data_dir;
  pc.morphology_path = config.morphology_path;
  pc.fixture_paths = common.fixtures;
  return make_toolkit(pc);
}

// Annotation TSVs are read as they are; anything else is treated as raw text.
std::vector<AnnotatedSentence> read_sentences(const std::string& path, const Toolkit& toolkit) {
  if (is_tsv(path)) return load_annotations(path);
  std::vector<AnnotatedSentence> out;
  std::size_t n = 0;
  for (const auto& raw : split_sentences(read_file(path)))
    out.push_back(annotate(raw, toolkit.providers, "s" + std::to_string(++n)));
  return out;
}

void write_output(const std::string& path, const std::string& contents) {
  if (path.empty() || path == "-")
    std::cout << contents;
  else
    write_file_atomic(path, contents);
}

Config effective_config(const Common& common) {
  return common.config_path.empty() ? Config{} : load_config(common.config_path);
}

// ---------------------------------------------------------------------------

struct AnnotateArgs {
  std::string input;
  std::string out;
};

int run_annotate(const Common& common, const AnnotateArgs& args) {
  const auto config = effective_config(common);
  const auto toolkit = toolkit_for(common, config);
  write_output(args.out, format_annotations(read_sentences(args.input, toolkit)));
  return kExitOk;
}

struct TrainArgs {
  std::string pairs;
  std::string out;
  std::string base_store;
};

int run_train(const Common& common, const TrainArgs& args) {
  const auto config = effective_config(common);
  const auto toolkit = toolkit_for(common, config);
  const auto pairs = load_training_pairs(args.pairs);
  TrainingReport report;
  RuleStore store;
  if (!args.base_store.empty()) {
    store = load_store(args.base_store);
    train_into(store, pairs, toolkit.providers, *toolkit.morphology, &report);
  } else {
    store = train(pairs, toolkit.providers, *toolkit.morphology, &report);
  }
  save_store(store, args.out);
  std::cerr << "pairs: " << report.pairs << "\nextracted: " << report.extracted << "\nadded: " << report.added
            << "\nrules: " << store.size() << "\nwarnings: " << report.failures.size() << "\n";
  return kExitOk;
}

struct GenerateArgs {
  std::string store;
  std::string input;
  std::string out;
  std::string system = "qgen";
  bool no_simplify = false;
  double min_similarity = 0;
  double min_score = 0;
  std::size_t max_per_sentence = 0;
  double dedup_threshold = 0;
};

int run_generate(const Common& common, GenerateArgs args, const CLI::App& sub) {
  auto config = effective_config(common);
  if (sub.count("--min-similarity")) config.min_similarity = args.min_similarity;
  if (sub.count("--min-score")) config.min_score = args.min_score;
  if (sub.count("--max-per-sentence")) config.max_per_sentence = args.max_per_sentence;
  if (sub.count("--dedup-threshold")) config.dedup_threshold = args.dedup_threshold;

  const auto toolkit = toolkit_for(common, config);
  const auto store = load_store(args.store);
  if (store.empty()) throw InputError(args.store + ": rule store is empty");
  const auto sentences = read_sentences(args.input, toolkit);

  GenerationOptions options;
  options.min_similarity = config.min_similarity;
  options.max_rules_per_sentence = config.max_per_sentence;
  options.simplify = !args.no_simplify;
  auto candidates = generate_questions(sentences, store, *toolkit.morphology, options);
  score_candidates(candidates, store);
  candidates = dedup(std::move(candidates), config.dedup_threshold, /*per_source=*/true);
  candidates = rank_and_filter(std::move(candidates), config.min_score, config.max_per_sentence);

  std::vector<QuestionRecord> records;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    auto r = to_record(candidates[i]);
    r.id = "q" + std::to_string(i + 1);
    r.system = args.system;
    records.push_back(std::move(r));
  }
  write_output(args.out, format_question_records(records));
  std::cerr << "sentences: " << sentences.size() << "\nquestions: " << records.size() << "\n";
  return kExitOk;
}

struct EvalArgs {
  std::string mode;
  std::string pairs;
  std::string questions;
  std::string references;
  std::string ratings;
  std::string out;
  bool json = false;
};

// references JSON-lines: {"source_id", "reference"}; one line per reference question
std::vector<metrics::EvalPair> join_references(const std::string& questions_path,
                                               const std::string& references_path) {
  std::multimap<std::string, std::string> refs;
  const auto contents = read_file(references_path);
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < contents.size()) {
    auto end = contents.find('\n', start);
    if (end == std::string::npos) end = contents.size();
    const auto line = text::trim(std::string_view(contents).substr(start, end - start));
    start = end + 1;
    ++line_no;
    if (line.empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      refs.emplace(j.at("source_id").get<std::string>(), j.at("reference").get<std::string>());
    } catch (const nlohmann::json::exception& e) {
      throw InputError(references_path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  std::vector<metrics::EvalPair> pairs;
  for (const auto& q : parse_question_records(read_file(questions_path), questions_path)) {
    auto [lo, hi] = refs.equal_range(q.source_id);
    for (auto it = lo; it != hi; ++it) pairs.push_back({q.source_id + "\t" + it->second, q.question, it->second});
  }
  return pairs;
}

int run_eval(const EvalArgs& args) {
  if (args.mode == "corpus") {
    std::vector<metrics::EvalPair> pairs;
    if (!args.pairs.empty())
      pairs = metrics::parse_eval_pairs(read_file(args.pairs), args.pairs);
    else if (!args.questions.empty() && !args.references.empty())
      pairs = join_references(args.questions, args.references);
    else
      throw InputError("corpus mode needs --pairs or --questions with --references");
    const auto report = metrics::corpus_report(pairs);
    write_output(args.out, args.json ? metrics::report_json(report) : metrics::format_report_table(report));
    return kExitOk;
  }

  if (args.ratings.empty()) throw InputError("irr mode needs --ratings");
  metrics::RatingsByQuestion overall, syntax, semantics;
  for (const auto& r : load_ratings(args.ratings)) {
    if (r.skipped) continue;
    overall[r.question_id].push_back(r.value());
    syntax[r.question_id].push_back(*r.syntax);
    semantics[r.question_id].push_back(*r.semantics);
  }
  // Warn about thinly rated questions once here rather than once per table.
  for (auto it = overall.begin(); it != overall.end();) {
    if (it->second.size() >= 2) {
      ++it;
      continue;
    }
    warn("question '" + it->first + "' has fewer than 2 ratings; excluded from IRR");
    syntax.erase(it->first);
    semantics.erase(it->first);
    it = overall.erase(it);
  }
  nlohmann::ordered_json j;
  for (const auto& [name, table] : {std::pair{"overall", &overall}, {"syntax", &syntax}, {"semantics", &semantics}})
    j[name] = {{"irr_b", metrics::irr_binary(*table)}, {"irr_n", metrics::irr_numeric(*table)}};
  j["questions"] = overall.size();
  if (args.json) {
    write_output(args.out, j.dump(2) + "\n");
  } else {
    std::string table;
    char buf[96];
    std::snprintf(buf, sizeof buf, "%-10s %8s %8s\n", "", "IRRb", "IRRn");
    table += buf;
    for (const char* name : {"overall", "syntax", "semantics"}) {
      std::snprintf(buf, sizeof buf, "%-10s %8.2f %8.2f\n", name, j[name]["irr_b"].get<double>(),
                    j[name]["irr_n"].get<double>());
      table += buf;
    }
    write_output(args.out, table);
  }
  return kExitOk;
}

struct ServeArgs {
  std::string questions;
  std::string store;
  std::string ratings_log;
  std::string store_out;
  std::string host = "127.0.0.1";
  int port = 0;
  std::uint64_t seed = 20190611;
};

int run_serve(const Common& common, const ServeArgs& args, const CLI::App& sub) {
  auto config = effective_config(common);
  if (sub.count("--port")) config.port = args.port;
  auto pool = parse_question_records(read_file(args.questions), args.questions);
  auto store = args.store.empty() ? RuleStore{} : load_store(args.store);
  ServiceOptions options;
  options.ratings_log = args.ratings_log;
  options.store_out = args.store_out;
  options.seed = args.seed;
  EvaluationService service(std::move(pool), std::move(store), options);

  httplib::Server server;
  register_routes(server, service);
  std::cerr << "serving " << service.pool_size() << " questions on http://" << args.host << ":" << config.port
            << "\n";
  if (!server.listen(args.host, config.port)) {
    std::cerr << "error: cannot listen on " << args.host << ":" << config.port << "\n";
    return kExitInternal;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rule-based question generation"};
  app.require_subcommand(1);
  Common common;
  app.add_option("--config", common.config_path, "key = value configuration file");
  app.add_option("--data-dir", common.data_dir, "directory with morphology, lexicon and gazetteer tables");
  app.add_option("--fixtures", common.fixtures, "annotation TSV files served before the built-in annotators");
  bool quiet = false;
  app.add_flag("-q,--quiet", quiet, "suppress warnings");

  AnnotateArgs annotate_args;
  auto* annotate_cmd = app.add_subcommand("annotate", "annotate raw text (or normalize an annotation TSV)");
  annotate_cmd->add_option("input", annotate_args.input)->required();
  annotate_cmd->add_option("-o,--out", annotate_args.out, "output TSV (default stdout)");

  TrainArgs train_args;
  auto* train_cmd = app.add_subcommand("train", "learn transformation rules from sentence-question pairs");
  train_cmd->add_option("pairs", train_args.pairs, "JSON-lines training pairs")->required();
  train_cmd->add_option("-o,--out", train_args.out, "rule store to write")->required();
  train_cmd->add_option("--base", train_args.base_store, "continue training this store");

  GenerateArgs gen_args;
  auto* gen_cmd = app.add_subcommand("generate", "generate ranked questions for new sentences");
  gen_cmd->add_option("-s,--store", gen_args.store)->required();
  gen_cmd->add_option("input", gen_args.input, "text file or annotation TSV")->required();
  gen_cmd->add_option("-o,--out", gen_args.out, "questions JSON-lines (default stdout)");
  gen_cmd->add_option("--min-similarity", gen_args.min_similarity)->check(CLI::Range(0.0, 1.0));
  gen_cmd->add_option("--min-score", gen_args.min_score)->check(CLI::Range(0.0, 1.0));
  gen_cmd->add_option("--max-per-sentence", gen_args.max_per_sentence);
  gen_cmd->add_option("--dedup-threshold", gen_args.dedup_threshold)->check(CLI::Range(0.0, 1.0));
  gen_cmd->add_option("--system", gen_args.system, "system label stored with each question");
  gen_cmd->add_flag("--no-simplify", gen_args.no_simplify, "skip sentence simplification");

  EvalArgs eval_args;
  auto* eval_cmd = app.add_subcommand("eval", "BLEU/ROUGE-L against references, or inter-rater reliability");
  eval_cmd->add_option("mode", eval_args.mode)->required()->check(CLI::IsMember({"corpus", "irr"}));
  eval_cmd->add_option("--pairs", eval_args.pairs, "JSON-lines {group, generated, reference}");
  eval_cmd->add_option("--questions", eval_args.questions, "questions file produced by generate");
  eval_cmd->add_option("--references", eval_args.references, "JSON-lines {source_id, reference}");
  eval_cmd->add_option("--ratings", eval_args.ratings, "ratings CSV");
  eval_cmd->add_option("-o,--out", eval_args.out);
  eval_cmd->add_flag("--json", eval_args.json);

  ServeArgs serve_args;
  auto* serve_cmd = app.add_subcommand("serve", "run the rating service");
  serve_cmd->add_option("--questions", serve_args.questions)->required();
  serve_cmd->add_option("-s,--store", serve_args.store);
  serve_cmd->add_option("--ratings-log", serve_args.ratings_log);
  serve_cmd->add_option("--store-out", serve_args.store_out, "rewrite the store after every rating");
  serve_cmd->add_option("--host", serve_args.host);
  serve_cmd->add_option("--port", serve_args.port)->check(CLI::Range(1, 65535));
  serve_cmd->add_option("--seed", serve_args.seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  set_warning_sink([quiet](std::string_view message) {
    if (!quiet) std::cerr << "warning: " << message << "\n";
  });

  try {
    effective_config(common);  // a broken config fails every subcommand, not just those that read it
    if (*annotate_cmd) return run_annotate(common, annotate_args);
    if (*train_cmd) return run_train(common, train_args);
    if (*gen_cmd) return run_generate(common, gen_args, *gen_cmd);
    if (*eval_cmd) return run_eval(eval_args);
    if (*serve_cmd) return run_serve(common, serve_args, *serve_cmd);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const RuleError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}
