// Copyright 2026 The policy2label Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "policy2label/category.hpp"
#include "policy2label/document.hpp"
#include "policy2label/embeddings.hpp"

namespace policy2label {

/// Probability per category, indexed by index_of(category).
using CategoryScores = std::array<double, kCategoryCount>;

enum class BackendKind { Linear, Keyword, External };

inline constexpr double kDefaultCategoryThreshold = 0.5;

/// Scores segments against the twelve categories. Implementations are
/// immutable once built and safe to share across threads.
class SegmentClassifier {
 public:
  explicit SegmentClassifier(double threshold = kDefaultCategoryThreshold);
  virtual ~SegmentClassifier() = default;

  virtual BackendKind kind() const = 0;
  virtual CategoryScores scores(const Segment& segment) const = 0;

  double threshold() const noexcept { return threshold_; }
  /// Throws std::invalid_argument unless 0 < threshold < 1.
  void set_threshold(double threshold);

 private:
  double threshold_;
};

struct Classification {
  CategoryScores scores{};
  CategorySet categories;
};

/// Scores `segment`, keeps the categories scoring strictly above the
/// threshold and stores them on the segment.
Classification classify(const SegmentClassifier& model, Segment& segment);

/// Classifies every segment in place.
void classify_all(const SegmentClassifier& model, std::vector<Segment>& segments);

/// One-vs-rest logistic regression over segment embeddings.
class LinearClassifier final : public SegmentClassifier {
 public:
  struct CategoryWeights {
    std::vector<double> weights;
    double bias = 0.0;
  };

  LinearClassifier(std::size_t dimension,
                   std::array<CategoryWeights, kCategoryCount> weights,
                   double threshold = kDefaultCategoryThreshold);

  BackendKind kind() const override { return BackendKind::Linear; }
  /// Throws MissingEmbedding when the segment has no embedding and
  /// DimensionMismatch when it has the wrong size.
  CategoryScores scores(const Segment& segment) const override;
  CategoryScores scores(const Vector& embedding) const;

  std::size_t dimension() const noexcept { return dimension_; }
  const CategoryWeights& weights(DataPracticeCategory c) const {
    return weights_[index_of(c)];
  }

  std::string to_json() const;
  static LinearClassifier from_json(std::string_view json);
  static LinearClassifier load(const std::filesystem::path& path);

 private:
  std::size_t dimension_;
  std::array<CategoryWeights, kCategoryCount> weights_;
};

struct TrainingExample {
  Vector embedding;
  CategorySet categories;
};

struct TrainingOptions {
  double learning_rate = 0.5;
  std::size_t epochs = 200;
  double l2 = 0.0;
  std::uint64_t seed = 42;
  double threshold = kDefaultCategoryThreshold;
};

/// Fits twelve independent logistic regressors with seeded per-epoch
/// shuffling. Throws InsufficientData on an empty set and DimensionMismatch
/// when embeddings disagree in size.
LinearClassifier train(const std::vector<TrainingExample>& examples,
                       const TrainingOptions& options = {});

/// Rule table mapping indicator phrases to categories. A category scores 1.0
/// when one of its phrases occurs in the segment text, 0.0 otherwise; the
/// embedding is never consulted.
class KeywordClassifier final : public SegmentClassifier {
 public:
  struct Rule {
    std::string phrase;
    CategorySet categories;
  };

  explicit KeywordClassifier(std::vector<Rule> rules,
                             double threshold = kDefaultCategoryThreshold);

  /// Rules compiled from data/keyword_rules.json.
  static KeywordClassifier builtin();
  /// {"rules": [{"phrase": str, "categories": [str, ...]}, ...]}
  static KeywordClassifier from_json(std::string_view json);

  BackendKind kind() const override { return BackendKind::Keyword; }
  CategoryScores scores(const Segment& segment) const override;
  const std::vector<Rule>& rules() const noexcept { return rules_; }

 private:
  std::vector<Rule> rules_;
};

/// Scores produced elsewhere, read from a sidecar file keyed by segment id:
/// {"<segment_id>": {"<category name>": probability, ...}, ...}.
/// Categories missing from an entry score 0.
class ExternalScores final : public SegmentClassifier {
 public:
  explicit ExternalScores(std::map<std::size_t, CategoryScores> by_segment,
                          double threshold = kDefaultCategoryThreshold);
  static ExternalScores from_json(std::string_view json);
  static ExternalScores load(const std::filesystem::path& path);

  BackendKind kind() const override { return BackendKind::External; }
  /// Throws Error when the segment id has no entry.
  CategoryScores scores(const Segment& segment) const override;

 private:
  std::map<std::size_t, CategoryScores> by_segment_;
};

}  // namespace policy2label
