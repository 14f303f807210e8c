// Copyright 2026 The policy2label Authors
// SPDX-License-Identifier: Apache-2.0

#include "policy2label/pipeline.hpp"

#include <atomic>
#include <fstream>
#include <sstream>
#include <system_error>
#include <unistd.h>

#include <json.hpp>

#include "policy2label/errors.hpp"

namespace policy2label {
namespace {

using ordered_json = nlohmann::ordered_json;

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void require_file(const std::filesystem::path& path, const char* what) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    throw ConfigError(std::string(what) + " file not found: " + path.string());
  }
}

std::shared_ptr<const SegmentClassifier> make_classifier_unchecked(const std::string& choice,
                                                                   double threshold) {
  auto colon = choice.find(':');
  std::string kind = colon == std::string::npos ? choice : choice.substr(0, colon);
  std::string arg = colon == std::string::npos ? "" : choice.substr(colon + 1);

  if (kind == "keyword") {
    auto model = arg.empty() ? KeywordClassifier::builtin()
                             : KeywordClassifier::from_json(read_text(arg));
    model.set_threshold(threshold);
    return std::make_shared<KeywordClassifier>(std::move(model));
  }
  if (kind == "external") {
    if (arg.empty()) throw ConfigError("external classifier needs a scores file");
    require_file(arg, "classifier scores");
    auto model = ExternalScores::load(arg);
    model.set_threshold(threshold);
    return std::make_shared<ExternalScores>(std::move(model));
  }
  std::filesystem::path model_path = kind == "linear" ? arg : choice;
  if (model_path.empty()) throw ConfigError("linear classifier needs a model file");
  require_file(model_path, "classifier model");
  auto model = LinearClassifier::load(model_path);
  model.set_threshold(threshold);
  return std::make_shared<LinearClassifier>(std::move(model));
}

std::shared_ptr<LlmClient> make_llm(const RunConfig& config) {
  switch (config.llm) {
    case LlmBackend::Http: {
      HttpCompletionOptions options;
      options.endpoint = config.endpoint;
      options.model = config.model;
      options.api_key = api_key_from_env();
      return std::make_shared<HttpCompletionClient>(std::move(options));
    }
    case LlmBackend::Replay:
      return std::make_shared<ReplayClient>(ReplayClient::load(*config.replay_file));
    case LlmBackend::MockKeyword:
      break;
  }
  if (config.mock_rules) {
    return std::make_shared<KeywordMockClient>(
        KeywordMockClient::from_json(read_text(*config.mock_rules)));
  }
  return std::make_shared<KeywordMockClient>(KeywordMockClient::builtin());
}

ordered_json categories_json(const CategorySet& set) {
  ordered_json out = ordered_json::array();
  for (auto c : set.members()) out.push_back(std::string(category_name(c)));
  return out;
}

}  // namespace

std::shared_ptr<const SentenceEmbedder> load_embedder(
    const std::optional<std::filesystem::path>& vectors) {
  if (!vectors) return std::make_shared<HashedBagOfWords>();
  require_file(*vectors, "vectors");
  try {
    return std::make_shared<WordVectorStore>(WordVectorStore::load(*vectors));
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
}

std::shared_ptr<const SegmentClassifier> load_classifier(const std::string& choice,
                                                         double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw ConfigError("--threshold must lie strictly between 0 and 1");
  }
  try {
    return make_classifier_unchecked(choice, threshold);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
}

void validate(const RunConfig& config) {
  require_file(config.schema, "schema");
  if (config.vectors) require_file(*config.vectors, "vectors");
  if (config.mock_rules) require_file(*config.mock_rules, "mock rules");
  if (!(config.tau >= -1.0 && config.tau <= 1.0)) {
    throw ConfigError("--tau must lie in [-1, 1]");
  }
  if (!(config.threshold > 0.0 && config.threshold < 1.0)) {
    throw ConfigError("--threshold must lie strictly between 0 and 1");
  }
  if (config.context_limit == 0) throw ConfigError("--context-limit must be positive");
  if (config.jobs == 0) throw ConfigError("--jobs must be positive");
  if (config.max_concurrent_requests == 0) {
    throw ConfigError("at least one concurrent request is required");
  }
  if (config.llm == LlmBackend::Http && config.endpoint.empty()) {
    throw ConfigError("--llm http requires --endpoint");
  }
  if (config.llm == LlmBackend::Replay) {
    if (!config.replay_file) throw ConfigError("--llm replay requires --replay-file");
    require_file(*config.replay_file, "replay");
  }
}

PipelineResources load_resources(const RunConfig& config) {
  validate(config);
  PipelineResources r;
  r.schema = load_schema(config.schema);

  r.embedder = load_embedder(config.vectors);
  r.classifier = load_classifier(config.classifier, config.threshold);
  r.llm = make_llm(config);

  r.segmenter.similarity_threshold = config.tau;
  r.generation.strategy = config.strategy;
  r.generation.context_word_limit = config.context_limit;
  r.generation.max_concurrent_requests = config.max_concurrent_requests;
  try {
    validate(r.generation);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return r;
}

CleanText prepare_text(const RawDocument& document) {
  auto text = filter_language(clean_html(document));
  auto verdict = quality_check(text);
  if (auto* reject = std::get_if<Reject>(&verdict)) {
    throw QualityRejected(std::string(to_string(reject->reason)));
  }
  return text;
}

DocumentResult segment_document(const RawDocument& document,
                                const PipelineResources& resources) {
  DocumentResult result;
  result.clean = prepare_text(document);
  result.sentences = split_sentences(result.clean);
  result.segments = segment(result.sentences, *resources.embedder, resources.segmenter);
  return result;
}

DocumentResult process_document(const RawDocument& document, const std::string& app_name,
                                const PipelineResources& resources) {
  auto result = segment_document(document, resources);
  classify_all(*resources.classifier, result.segments);
  if (resources.generation.strategy == Strategy::FullLlm) {
    result.generation = generate_label_full_llm(result.sentences, app_name, resources.schema,
                                                resources.generation, *resources.llm,
                                                *resources.llm);
  } else {
    result.generation = generate_label(result.segments, app_name, resources.schema,
                                       resources.generation, *resources.llm);
  }
  return result;
}

std::string segments_to_json(const std::vector<Segment>& segments, bool with_categories) {
  ordered_json out = ordered_json::array();
  for (const auto& s : segments) {
    ordered_json indices = ordered_json::array();
    for (std::size_t i = 0; i < s.sentence_count; ++i) indices.push_back(s.first_sentence + i);
    ordered_json entry = {
        {"segment_id", s.segment_id}, {"sentence_indices", std::move(indices)}, {"text", s.text}};
    if (with_categories) entry["categories"] = categories_json(s.categories);
    out.push_back(std::move(entry));
  }
  return out.dump(2, ' ', false, nlohmann::json::error_handler_t::replace) + "\n";
}

std::string cost_to_json(const CostStats& cost, Strategy strategy) {
  ordered_json out = {{"strategy", std::string(to_string(strategy))},
                      {"prompts_sent", cost.prompts_sent},
                      {"prompt_words", cost.prompt_words},
                      {"answer_words", cost.answer_words},
                      {"unmatched_lines", cost.unmatched_lines}};
  return out.dump(2) + "\n";
}

void write_file_atomically(const std::filesystem::path& path, const std::string& contents) {
  static std::atomic<unsigned> counter{0};
  auto tmp = path;
  tmp += ".tmp-" + std::to_string(::getpid()) + "-" + std::to_string(counter.fetch_add(1));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out << contents;
    out.flush();
    if (!out) {
      out.close();
      std::filesystem::remove(tmp);
      throw IoError("cannot write " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw IoError("cannot rename into " + path.string() + ": " + ec.message());
  }
}

int exit_code_for(const std::exception& error) {
  if (dynamic_cast<const QualityRejected*>(&error) || dynamic_cast<const EmptyDocument*>(&error) ||
      dynamic_cast<const NonPrimaryLanguageDocument*>(&error)) {
    return kExitQualityRejected;
  }
  if (dynamic_cast<const LlmError*>(&error)) return kExitLlmError;
  if (dynamic_cast<const ConfigError*>(&error) || dynamic_cast<const SchemaInvalid*>(&error)) {
    return kExitConfigError;
  }
  return kExitFailure;
}

void generate_to_directory(const RawDocument& document, const std::string& app_name,
                           const PipelineResources& resources,
                           const std::filesystem::path& out_dir) {
  auto result = process_document(document, app_name, resources);
  std::filesystem::create_directories(out_dir);
  write_file_atomically(out_dir / "segments.json", segments_to_json(result.segments, true));
  write_file_atomically(out_dir / "cost.json",
                        cost_to_json(result.generation.cost, resources.generation.strategy));
  write_file_atomically(out_dir / "label.json", to_json(result.generation.label));
}

}  // namespace policy2label
