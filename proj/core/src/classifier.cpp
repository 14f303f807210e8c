// Copyright 2026 The policy2label Authors
// SPDX-License-Identifier: Apache-2.0

#include "policy2label/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "embedded_data.hpp"
#include "policy2label/errors.hpp"
#include "text_match.hpp"

namespace policy2label {
namespace {

using nlohmann::json;

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  double e = std::exp(z);
  return e / (1.0 + e);
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

DataPracticeCategory category_or_throw(const std::string& name) {
  auto c = parse_category(name);
  if (!c) throw Error("unknown data practice category \"" + name + "\"");
  return *c;
}

double threshold_from(const json& doc) {
  return doc.value("threshold", kDefaultCategoryThreshold);
}

}  // namespace

SegmentClassifier::SegmentClassifier(double threshold) : threshold_(0.5) {
  set_threshold(threshold);
}

void SegmentClassifier::set_threshold(double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw std::invalid_argument("classification threshold must lie in (0, 1)");
  }
  threshold_ = threshold;
}

Classification classify(const SegmentClassifier& model, Segment& segment) {
  Classification result;
  result.scores = model.scores(segment);
  for (auto c : kAllCategories) {
    if (result.scores[index_of(c)] > model.threshold()) result.categories.insert(c);
  }
  segment.categories = result.categories;
  return result;
}

void classify_all(const SegmentClassifier& model, std::vector<Segment>& segments) {
  for (auto& s : segments) classify(model, s);
}

// Linear backend.

LinearClassifier::LinearClassifier(std::size_t dimension,
                                   std::array<CategoryWeights, kCategoryCount> weights,
                                   double threshold)
    : SegmentClassifier(threshold), dimension_(dimension), weights_(std::move(weights)) {
  for (const auto& w : weights_) {
    if (w.weights.size() != dimension_) {
      throw DimensionMismatch("weight vector of size " + std::to_string(w.weights.size()) +
                              " for dimension " + std::to_string(dimension_));
    }
  }
}

CategoryScores LinearClassifier::scores(const Segment& segment) const {
  if (!segment.embedding) {
    throw MissingEmbedding("segment " + std::to_string(segment.segment_id) +
                           " has no embedding");
  }
  return scores(*segment.embedding);
}

CategoryScores LinearClassifier::scores(const Vector& embedding) const {
  if (embedding.size() != dimension_) {
    throw DimensionMismatch("embedding of dimension " + std::to_string(embedding.size()) +
                            ", model expects " + std::to_string(dimension_));
  }
  CategoryScores out{};
  auto x = embedding.components();
  for (std::size_t c = 0; c < kCategoryCount; ++c) {
    const auto& w = weights_[c];
    double z = std::inner_product(x.begin(), x.end(), w.weights.begin(), w.bias);
    out[c] = sigmoid(z);
  }
  return out;
}

std::string LinearClassifier::to_json() const {
  json doc;
  doc["backend"] = "linear";
  doc["dimension"] = dimension_;
  doc["threshold"] = threshold();
  for (auto c : kAllCategories) {
    std::string name(category_name(c));
    doc["weights"][name] = weights_[index_of(c)].weights;
    doc["biases"][name] = weights_[index_of(c)].bias;
  }
  return doc.dump(2) + "\n";
}

LinearClassifier LinearClassifier::from_json(std::string_view text) {
  try {
    auto doc = json::parse(text);
    auto dimension = doc.at("dimension").get<std::size_t>();
    std::array<CategoryWeights, kCategoryCount> weights;
    for (auto c : kAllCategories) {
      std::string name(category_name(c));
      weights[index_of(c)].weights = doc.at("weights").at(name).get<std::vector<double>>();
      weights[index_of(c)].bias = doc.at("biases").at(name).get<double>();
    }
    return LinearClassifier(dimension, std::move(weights), threshold_from(doc));
  } catch (const json::exception& e) {
    throw Error(std::string("invalid linear model: ") + e.what());
  }
}

LinearClassifier LinearClassifier::load(const std::filesystem::path& path) {
  return from_json(read_text(path));
}

LinearClassifier train(const std::vector<TrainingExample>& examples,
                       const TrainingOptions& options) {
  if (examples.empty()) throw InsufficientData("no training examples");
  const std::size_t dim = examples.front().embedding.size();
  for (const auto& ex : examples) {
    if (ex.embedding.size() != dim) {
      throw DimensionMismatch("training embeddings disagree in dimension");
    }
  }

  std::array<LinearClassifier::CategoryWeights, kCategoryCount> model;
  for (auto& w : model) w.weights.assign(dim, 0.0);

  std::vector<std::size_t> order(examples.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(options.seed);

  for (std::size_t epoch = 0; epoch < options.epochs; ++epoch) {
    // Fisher-Yates on raw engine output; std::shuffle differs between
    // standard libraries.
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng() % i]);
    for (std::size_t idx : order) {
      const auto& ex = examples[idx];
      auto x = ex.embedding.components();
      for (auto c : kAllCategories) {
        auto& w = model[index_of(c)];
        double z = std::inner_product(x.begin(), x.end(), w.weights.begin(), w.bias);
        double gradient = sigmoid(z) - (ex.categories.contains(c) ? 1.0 : 0.0);
        for (std::size_t k = 0; k < dim; ++k) {
          w.weights[k] -= options.learning_rate * (gradient * x[k] + options.l2 * w.weights[k]);
        }
        w.bias -= options.learning_rate * gradient;
      }
    }
  }
  return LinearClassifier(dim, std::move(model), options.threshold);
}

// Keyword backend.

KeywordClassifier::KeywordClassifier(std::vector<Rule> rules, double threshold)
    : SegmentClassifier(threshold), rules_(std::move(rules)) {
  for (auto& rule : rules_) rule.phrase = detail::ascii_lower(rule.phrase);
}

KeywordClassifier KeywordClassifier::builtin() { return from_json(data::kKeywordRules); }

KeywordClassifier KeywordClassifier::from_json(std::string_view text) {
  try {
    auto doc = json::parse(text);
    std::vector<Rule> rules;
    for (const auto& entry : doc.at("rules")) {
      Rule rule;
      rule.phrase = entry.at("phrase").get<std::string>();
      for (const auto& name : entry.at("categories")) {
        rule.categories.insert(category_or_throw(name.get<std::string>()));
      }
      rules.push_back(std::move(rule));
    }
    return KeywordClassifier(std::move(rules), threshold_from(doc));
  } catch (const json::exception& e) {
    throw Error(std::string("invalid keyword rules: ") + e.what());
  }
}

CategoryScores KeywordClassifier::scores(const Segment& segment) const {
  CategoryScores out{};
  auto text = detail::ascii_lower(segment.text);
  for (const auto& rule : rules_) {
    if (!detail::contains_at_word_start(text, rule.phrase)) continue;
    for (auto c : rule.categories.members()) out[index_of(c)] = 1.0;
  }
  return out;
}

// External backend.

ExternalScores::ExternalScores(std::map<std::size_t, CategoryScores> by_segment,
                               double threshold)
    : SegmentClassifier(threshold), by_segment_(std::move(by_segment)) {}

ExternalScores ExternalScores::from_json(std::string_view text) {
  try {
    auto doc = json::parse(text);
    std::map<std::size_t, CategoryScores> by_segment;
    for (const auto& [key, entry] : doc.items()) {
      std::size_t id = 0;
      try {
        id = std::stoul(key);
      } catch (const std::exception&) {
        throw Error("external scores: segment id \"" + key + "\" is not a number");
      }
      CategoryScores scores{};
      for (const auto& [name, value] : entry.items()) {
        double p = value.get<double>();
        if (!(p >= 0.0 && p <= 1.0)) {
          throw Error("external scores: probability outside [0, 1] for segment " + key);
        }
        scores[index_of(category_or_throw(name))] = p;
      }
      by_segment[id] = scores;
    }
    return ExternalScores(std::move(by_segment));
  } catch (const json::exception& e) {
    throw Error(std::string("invalid external scores: ") + e.what());
  }
}

ExternalScores ExternalScores::load(const std::filesystem::path& path) {
  return from_json(read_text(path));
}

CategoryScores ExternalScores::scores(const Segment& segment) const {
  auto it = by_segment_.find(segment.segment_id);
  if (it == by_segment_.end()) {
    throw Error("external scores have no entry for segment " +
                std::to_string(segment.segment_id));
  }
  return it->second;
}

}  // namespace policy2label
