// Copyright 2026 The policy2label Authors
// SPDX-License-Identifier: Apache-2.0

// policy2label command-line driver.

#include <algorithm>
#include <atomic>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "policy2label/classifier.hpp"
#include "policy2label/errors.hpp"
#include "policy2label/evaluation.hpp"
#include "policy2label/pipeline.hpp"

namespace fs = std::filesystem;
using namespace policy2label;

namespace {

struct Options {
  std::string policy;
  std::string corpus;
  std::string labels;
  std::string app;
  std::string schema;
  std::string vectors;
  std::string classifier = "keyword";
  std::string llm = "mock-keyword";
  std::string endpoint;
  std::string model;
  std::string replay_file;
  std::string mock_rules;
  std::string strategy = "hybrid";
  std::string examples;
  double tau = 0.85;
  double threshold = kDefaultCategoryThreshold;
  std::size_t context_limit = 1200;
  bool exclude_omnibus = false;
  std::string out = ".";
  std::size_t jobs = 1;
};

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

RunConfig to_run_config(const Options& o) {
  RunConfig c;
  c.schema = o.schema;
  if (!o.vectors.empty()) c.vectors = o.vectors;
  c.classifier = o.classifier;
  if (o.llm == "http") {
    c.llm = LlmBackend::Http;
  } else if (o.llm == "replay") {
    c.llm = LlmBackend::Replay;
  } else {
    c.llm = LlmBackend::MockKeyword;
  }
  c.endpoint = o.endpoint;
  c.model = o.model;
  if (!o.replay_file.empty()) c.replay_file = o.replay_file;
  if (!o.mock_rules.empty()) c.mock_rules = o.mock_rules;
  c.strategy = o.strategy == "full-llm" ? Strategy::FullLlm : Strategy::Hybrid;
  c.tau = o.tau;
  c.threshold = o.threshold;
  c.context_limit = o.context_limit;
  c.exclude_omnibus = o.exclude_omnibus;
  c.out = o.out;
  c.jobs = o.jobs;
  return c;
}

// Segment-only stages need no schema or LLM.
PipelineResources load_light_resources(const Options& o, bool with_classifier) {
  if (!(o.tau >= -1.0 && o.tau <= 1.0)) throw ConfigError("--tau must lie in [-1, 1]");
  PipelineResources r;
  r.embedder = load_embedder(o.vectors.empty() ? std::nullopt
                                               : std::optional<fs::path>(o.vectors));
  r.segmenter.similarity_threshold = o.tau;
  if (with_classifier) r.classifier = load_classifier(o.classifier, o.threshold);
  return r;
}

struct CorpusEntry {
  std::string app_id;
  std::string app_name;
  fs::path policy;
};

bool is_policy_file(const fs::path& p) {
  auto ext = p.extension().string();
  return ext == ".html" || ext == ".htm" || ext == ".txt" || ext == ".text";
}

// A corpus is a directory of policy files, or of app directories holding a
// policy.html / policy.txt file and optionally app_name.txt.
std::vector<CorpusEntry> list_corpus(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw ConfigError("corpus directory not found: " + dir.string());
  std::vector<CorpusEntry> entries;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && is_policy_file(e.path())) {
      entries.push_back({e.path().stem().string(), e.path().stem().string(), e.path()});
    } else if (e.is_directory()) {
      for (const char* name : {"policy.html", "policy.htm", "policy.txt"}) {
        if (!fs::is_regular_file(e.path() / name)) continue;
        CorpusEntry entry{e.path().filename().string(), "", e.path() / name};
        entry.app_name = entry.app_id;
        if (fs::is_regular_file(e.path() / "app_name.txt")) {
          std::string line;
          std::ifstream in(e.path() / "app_name.txt");
          if (std::getline(in, line) && !line.empty()) entry.app_name = line;
        }
        entries.push_back(std::move(entry));
        break;
      }
    }
  }
  std::sort(entries.begin(), entries.end(),
            [](const CorpusEntry& a, const CorpusEntry& b) { return a.app_id < b.app_id; });
  return entries;
}

int report(const std::exception& e) {
  int code = exit_code_for(e);
  std::cerr << "policy2label: " << e.what() << "\n";
  if (auto* partial = dynamic_cast<const AttributeLlmError*>(&e)) {
    std::cerr << "policy2label: answered " << partial->completed_pairs() << " of "
              << partial->total_pairs() << " attributes before the failure\n";
  }
  return code;
}

int cmd_fetch(const Options& o) {
  if (o.policy.empty()) throw ConfigError("fetch requires --policy <url>");
  auto doc = fetch_policy(o.policy);
  fs::path out = o.out;
  if (fs::is_directory(out)) {
    out /= doc.media_kind == MediaKind::PlainText ? "policy.txt" : "policy.html";
  }
  write_file_atomically(out, doc.content);
  std::cerr << "policy2label: wrote " << out.string() << "\n";
  return kExitOk;
}

int cmd_segment(const Options& o, bool classify) {
  if (o.policy.empty()) throw ConfigError("--policy is required");
  auto resources = load_light_resources(o, classify);
  auto doc = read_document(o.policy);
  auto result = segment_document(doc, resources);
  if (classify) classify_all(*resources.classifier, result.segments);
  fs::create_directories(o.out);
  write_file_atomically(fs::path(o.out) / "segments.json",
                        segments_to_json(result.segments, classify));
  return kExitOk;
}

int cmd_generate(const Options& o) {
  if (o.policy.empty() == o.corpus.empty()) {
    throw ConfigError("generate needs exactly one of --policy or --corpus");
  }
  auto config = to_run_config(o);
  auto resources = load_resources(config);

  if (!o.policy.empty()) {
    auto doc = read_document(o.policy);
    std::string app = o.app.empty() ? fs::path(o.policy).stem().string() : o.app;
    generate_to_directory(doc, app, resources, o.out);
    return kExitOk;
  }

  auto entries = list_corpus(o.corpus);
  std::vector<int> codes(entries.size(), kExitOk);
  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < entries.size(); i = next.fetch_add(1)) {
      try {
        auto doc = read_document(entries[i].policy);
        generate_to_directory(doc, entries[i].app_name, resources,
                              fs::path(o.out) / entries[i].app_id);
      } catch (const std::exception& e) {
        std::lock_guard lock(log_mutex);
        std::cerr << entries[i].app_id << ": ";
        codes[i] = report(e);
      }
    }
  };
  std::size_t workers = std::max<std::size_t>(1, std::min(o.jobs, entries.size()));
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
  }
  for (int code : codes) {
    if (code != kExitOk) return code;
  }
  return kExitOk;
}

std::optional<CostStats> read_cost(const fs::path& path) {
  if (!fs::is_regular_file(path)) return std::nullopt;
  auto j = nlohmann::json::parse(read_text(path));
  CostStats c;
  c.prompts_sent = j.value("prompts_sent", std::size_t{0});
  c.prompt_words = j.value("prompt_words", std::size_t{0});
  c.answer_words = j.value("answer_words", std::size_t{0});
  c.unmatched_lines = j.value("unmatched_lines", std::size_t{0});
  return c;
}

// Reads <labels>/<app>/label.json against <corpus>/<app>/truth.json and the
// optional declared.json.
std::vector<AppLabels> read_labels(const Options& o, const LabelSchema& schema,
                                   std::optional<CostStats>& cost) {
  if (o.corpus.empty()) throw ConfigError("--corpus is required");
  fs::path corpus = o.corpus;
  fs::path labels = o.labels.empty() ? corpus : fs::path(o.labels);
  if (!fs::is_directory(corpus)) throw ConfigError("corpus directory not found: " + o.corpus);
  std::vector<fs::path> apps;
  for (const auto& e : fs::directory_iterator(corpus)) {
    if (e.is_directory() && fs::is_regular_file(e.path() / "truth.json")) {
      apps.push_back(e.path());
    }
  }
  std::sort(apps.begin(), apps.end());
  std::vector<AppLabels> out;
  for (const auto& dir : apps) {
    AppLabels a;
    a.app_id = dir.filename().string();
    a.truth = load_label(dir / "truth.json");
    auto generated = labels / a.app_id / "label.json";
    a.generated = fs::is_regular_file(generated) ? load_label(generated)
                                                 : empty_label(schema, LabelOrigin::Generated);
    if (fs::is_regular_file(dir / "declared.json")) a.declared = load_label(dir / "declared.json");
    if (auto c = read_cost(labels / a.app_id / "cost.json")) {
      if (!cost) cost = CostStats{};
      *cost += *c;
    }
    out.push_back(std::move(a));
  }
  if (out.empty()) throw ConfigError("no app with truth.json under " + o.corpus);
  return out;
}

int cmd_eval(const Options& o, bool audit_only) {
  LabelSchema schema;
  try {
    schema = load_schema(o.schema);
  } catch (const IoError& e) {
    throw ConfigError(e.what());
  }
  std::optional<CostStats> cost;
  auto apps = read_labels(o, schema, cost);
  auto report = evaluate(apps, schema, o.exclude_omnibus);
  report.cost = cost;
  fs::create_directories(o.out);
  std::string stem = audit_only ? "audit_report" : "eval_report";
  if (audit_only) {
    report.metrics.clear();
    report.metrics_without_omnibus.clear();
  }
  write_file_atomically(fs::path(o.out) / (stem + ".json"), to_json(report));
  auto text = to_text(report);
  write_file_atomically(fs::path(o.out) / (stem + ".txt"), text);
  std::cout << text;
  return kExitOk;
}

// Examples file: [{"text": str, "categories": [str, ...]}, ...] or entries
// carrying an "embedding" array instead of text.
int cmd_train(const Options& o) {
  if (o.examples.empty()) throw ConfigError("train-classifier requires --examples");
  auto resources = load_light_resources(o, false);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_text(o.examples));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("examples: ") + e.what());
  }
  std::vector<TrainingExample> examples;
  for (const auto& e : j) {
    TrainingExample ex{Vector{}, {}};
    if (e.contains("embedding")) {
      ex.embedding = Vector(e.at("embedding").get<std::vector<double>>());
    } else {
      ex.embedding = resources.embedder->embed(e.at("text").get<std::string>());
    }
    for (const auto& name : e.at("categories")) {
      auto c = parse_category(name.get<std::string>());
      if (!c) throw ConfigError("unknown category " + name.get<std::string>());
      ex.categories.insert(*c);
    }
    examples.push_back(std::move(ex));
  }
  TrainingOptions options;
  options.threshold = o.threshold;
  auto model = train(examples, options);
  fs::path out = o.out;
  if (fs::is_directory(out)) out /= "classifier.json";
  write_file_atomically(out, model.to_json());
  std::cerr << "policy2label: wrote " << out.string() << "\n";
  return kExitOk;
}

// Turns a JSON object of flag values into command-line arguments. Values
// given on the real command line come later and win.
std::vector<std::string> config_arguments(const fs::path& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_text(path));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  if (!j.is_object()) throw ConfigError(path.string() + ": expected a JSON object");
  std::vector<std::string> args;
  for (const auto& [key, value] : j.items()) {
    std::string flag = "--" + key;
    std::replace(flag.begin(), flag.end(), '_', '-');
    if (value.is_boolean()) {
      if (value.get<bool>()) args.push_back(flag);
    } else if (value.is_string()) {
      args.push_back(flag);
      args.push_back(value.get<std::string>());
    } else if (value.is_number()) {
      args.push_back(flag);
      args.push_back(value.dump());
    } else {
      throw ConfigError(path.string() + ": unsupported value for \"" + key + "\"");
    }
  }
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    // --config is expanded before parsing so that explicit flags override it.
    for (std::size_t i = 0; i < args.size(); ++i) {
      std::string path;
      if (args[i] == "--config" && i + 1 < args.size()) {
        path = args[i + 1];
        args.erase(args.begin() + static_cast<long>(i), args.begin() + static_cast<long>(i) + 2);
      } else if (args[i].rfind("--config=", 0) == 0) {
        path = args[i].substr(9);
        args.erase(args.begin() + static_cast<long>(i));
      } else {
        continue;
      }
      auto extra = config_arguments(path);
      std::size_t insert_at = args.empty() ? 0 : 1;  // after the subcommand
      args.insert(args.begin() + static_cast<long>(insert_at), extra.begin(), extra.end());
      break;
    }
  } catch (const std::exception& e) {
    return report(e);
  }

  CLI::App app{"Generate privacy nutrition labels from privacy policies", "policy2label"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  app.add_option("--config", "JSON file of flag values; flags given here override it");

  Options o;
  auto* fetch = app.add_subcommand("fetch", "Download a policy");
  auto* seg = app.add_subcommand("segment", "Clean, filter and segment a policy");
  auto* cls = app.add_subcommand("classify", "Segment and classify a policy");
  auto* gen = app.add_subcommand("generate", "Run the whole pipeline");
  auto* audit = app.add_subcommand("audit", "Find under-claimed practices in declared labels");
  auto* eval = app.add_subcommand("eval", "Score generated labels against ground truth");
  auto* trn = app.add_subcommand("train-classifier", "Fit the linear category classifier");

  for (auto* sub : {fetch, seg, cls, gen}) sub->add_option("--policy", o.policy, "Policy file or URL");
  for (auto* sub : {gen, audit, eval}) {
    sub->add_option("--corpus", o.corpus, "Corpus directory");
    sub->add_option("--schema", o.schema, "Label schema JSON");
    sub->add_flag("--exclude-omnibus", o.exclude_omnibus, "Skip omnibus attributes");
  }
  for (auto* sub : {audit, eval}) {
    sub->add_option("--labels", o.labels, "Directory of generated <app>/label.json files");
  }
  for (auto* sub : {seg, cls, gen, trn}) {
    sub->add_option("--vectors", o.vectors, "Word vectors in .vec text format");
    sub->add_option("--tau", o.tau, "Segment merge threshold");
  }
  for (auto* sub : {cls, gen, trn}) {
    sub->add_option("--threshold", o.threshold, "Category inclusion threshold");
  }
  for (auto* sub : {cls, gen}) {
    sub->add_option("--classifier", o.classifier,
                    "keyword[:rules.json] | linear:model.json | external:scores.json");
  }
  gen->add_option("--app", o.app, "App name shown in prompts");
  gen->add_option("--llm", o.llm, "LLM backend")
      ->check(CLI::IsMember({"http", "mock-keyword", "replay"}));
  gen->add_option("--endpoint", o.endpoint, "Completion endpoint URL");
  gen->add_option("--model", o.model, "Model name sent to the endpoint");
  gen->add_option("--replay-file", o.replay_file, "Recorded answers for --llm replay");
  gen->add_option("--mock-rules", o.mock_rules, "Rules for --llm mock-keyword");
  gen->add_option("--strategy", o.strategy, "Label generation strategy")
      ->check(CLI::IsMember({"hybrid", "full-llm"}));
  gen->add_option("--context-limit", o.context_limit, "Context words per prompt");
  gen->add_option("--jobs", o.jobs, "Documents processed in parallel");
  trn->add_option("--examples", o.examples, "Training examples JSON");
  for (auto* sub : {fetch, seg, cls, gen, audit, eval, trn}) {
    sub->add_option("--out", o.out, "Output directory (or file for fetch/train-classifier)");
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  try {
    if (*fetch) return cmd_fetch(o);
    if (*seg) return cmd_segment(o, false);
    if (*cls) return cmd_segment(o, true);
    if (*gen) return cmd_generate(o);
    if (*audit) return cmd_eval(o, true);
    if (*eval) return cmd_eval(o, false);
    if (*trn) return cmd_train(o);
  } catch (const std::exception& e) {
    return report(e);
  }
  return kExitFailure;
}
