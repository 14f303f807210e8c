// Copyright 2026 The policy2label Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "policy2label/generation.hpp"
#include "policy2label/schema.hpp"

namespace policy2label {

struct Confusion {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;

  std::size_t total() const { return tp + fp + fn + tn; }
  friend bool operator==(const Confusion&, const Confusion&) = default;
};

struct ConfusionCounts {
  std::size_t corpus_size = 0;
  std::map<LabelKey, Confusion> by_attribute;
};

struct LabelPair {
  PrivacyLabel generated;
  PrivacyLabel truth;
};

/// Tallies Present/Absent agreement per attribute, Present being the positive
/// class. Omnibus attributes are left out when `exclude_omnibus` is set.
/// Throws SchemaMismatch if a label does not validate against `schema`.
ConfusionCounts compare_labels(const std::vector<LabelPair>& pairs,
                               const LabelSchema& schema, bool exclude_omnibus);

struct AttributeMetrics {
  std::string attribute;
  Confusion counts;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  /// Filled for YesNo attributes only.
  std::optional<double> accuracy;
  /// False when the attribute never occurs (tp + fp + fn == 0); such
  /// attributes do not enter the macro average.
  bool included = true;
};

struct SectionMetrics {
  std::string section;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  /// Mean accuracy over the section's YesNo attributes, if it has any.
  std::optional<double> accuracy;
  std::size_t corpus_size = 0;
  std::vector<AttributeMetrics> attributes;
};

AttributeMetrics attribute_metrics(const std::string& name, const Confusion& counts,
                                   ValueDomain domain, std::size_t corpus_size);

/// Unweighted means of per-attribute precision, recall and F1 over the
/// section's counted attributes. Throws EmptySection if none qualifies.
SectionMetrics macro_metrics(const ConfusionCounts& counts, const Section& section);

struct UnderclaimFinding {
  std::string app_id;
  std::string section;
  std::string attribute;
  /// The generated label also marks the attribute Present.
  bool detected = false;
  std::vector<Evidence> evidence;
};

/// Attributes Present in `truth` but Absent in `declared`.
std::vector<UnderclaimFinding> detect_underclaims(
    const std::string& app_id, const PrivacyLabel& truth,
    const PrivacyLabel& declared, const PrivacyLabel& generated,
    const LabelSchema& schema, bool exclude_omnibus);

/// detected / total, or nullopt when there are no findings.
std::optional<double> detection_rate(const std::vector<UnderclaimFinding>& findings);

struct EvalReport {
  std::string schema_ref;
  std::size_t corpus_size = 0;
  /// nullopt marks a section without any countable attribute.
  std::vector<std::pair<std::string, std::optional<SectionMetrics>>> metrics;
  std::vector<std::pair<std::string, std::optional<SectionMetrics>>>
      metrics_without_omnibus;
  std::vector<UnderclaimFinding> findings;
  std::optional<double> detection_rate;
  std::optional<CostStats> cost;
};

struct AppLabels {
  std::string app_id;
  PrivacyLabel generated;
  PrivacyLabel truth;
  std::optional<PrivacyLabel> declared;
};

/// Metrics with and without omnibus attributes plus under-claim findings for
/// every app that has a declared label.
EvalReport evaluate(const std::vector<AppLabels>& apps, const LabelSchema& schema,
                    bool exclude_omnibus_in_audit = true);

std::string to_json(const EvalReport& report);
/// Fixed columns: section, precision, recall, F1, accuracy.
std::string to_text(const EvalReport& report);

}  // namespace policy2label
