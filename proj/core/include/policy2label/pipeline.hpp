// Copyright 2026 The policy2label Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "policy2label/classifier.hpp"
#include "policy2label/document.hpp"
#include "policy2label/embeddings.hpp"
#include "policy2label/generation.hpp"
#include "policy2label/llm.hpp"
#include "policy2label/schema.hpp"

namespace policy2label {

enum class LlmBackend { Http, MockKeyword, Replay };

/// Everything a pipeline run needs, normally assembled from CLI flags and an
/// optional JSON config file.
struct RunConfig {
  std::filesystem::path schema;
  std::optional<std::filesystem::path> vectors;
  /// "keyword", "keyword:<rules.json>", "linear:<model.json>",
  /// "external:<scores.json>" or a bare path to a linear model.
  std::string classifier = "keyword";
  LlmBackend llm = LlmBackend::MockKeyword;
  std::string endpoint;
  std::string model;
  std::optional<std::filesystem::path> replay_file;
  std::optional<std::filesystem::path> mock_rules;
  Strategy strategy = Strategy::Hybrid;
  double tau = 0.85;
  double threshold = kDefaultCategoryThreshold;
  std::size_t context_limit = 1200;
  bool exclude_omnibus = false;
  std::filesystem::path out = ".";
  std::size_t jobs = 1;
  std::size_t max_concurrent_requests = 4;
};

/// Throws ConfigError on unreadable files or out-of-range values.
void validate(const RunConfig& config);

/// Shared, immutable (apart from the LLM client) run resources.
struct PipelineResources {
  LabelSchema schema;
  std::shared_ptr<const SentenceEmbedder> embedder;
  std::shared_ptr<const SegmentClassifier> classifier;
  std::shared_ptr<LlmClient> llm;
  GenerationConfig generation;
  SegmenterConfig segmenter;
};

/// Word vectors from `vectors`, or the hashed bag-of-words embedder when no
/// file is given. Throws ConfigError.
std::shared_ptr<const SentenceEmbedder> load_embedder(
    const std::optional<std::filesystem::path>& vectors);

/// Builds a classifier from a string such as "keyword" or "linear:model.json".
/// Throws ConfigError.
std::shared_ptr<const SegmentClassifier> load_classifier(const std::string& choice,
                                                         double threshold);

/// Loads schema, vectors, classifier and LLM backend. Throws ConfigError.
PipelineResources load_resources(const RunConfig& config);

struct DocumentResult {
  CleanText clean;
  std::vector<Sentence> sentences;
  std::vector<Segment> segments;
  GenerationResult generation;
};

/// Cleaning, language filter and quality gate. Throws QualityRejected.
CleanText prepare_text(const RawDocument& document);

/// Cleaning through segmentation (no classification).
DocumentResult segment_document(const RawDocument& document,
                                const PipelineResources& resources);

/// The whole pipeline for one policy. Throws QualityRejected, LlmError.
DocumentResult process_document(const RawDocument& document, const std::string& app_name,
                                const PipelineResources& resources);

std::string segments_to_json(const std::vector<Segment>& segments, bool with_categories);
std::string cost_to_json(const CostStats& cost, Strategy strategy);

/// Writes `contents` to a sibling temporary file and renames it into place.
void write_file_atomically(const std::filesystem::path& path, const std::string& contents);

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitQualityRejected = 2,
  kExitLlmError = 3,
  kExitConfigError = 4,
};

/// Maps an exception thrown by the pipeline to its exit code.
int exit_code_for(const std::exception& error);

/// Runs the pipeline on one policy and writes segments.json, label.json and
/// cost.json into `out_dir`. Nothing is written if the run fails.
void generate_to_directory(const RawDocument& document, const std::string& app_name,
                           const PipelineResources& resources,
                           const std::filesystem::path& out_dir);

}  // namespace policy2label
