// Copyright 2026 The policy2label Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <random>

#include <gtest/gtest.h>
#include <json.hpp>

#include "policy2label/errors.hpp"
#include "policy2label/evaluation.hpp"
#include "test_util.hpp"

using namespace policy2label;
using p2l_test::google_schema;

namespace {

const std::string kFirst = "First-party data collected";

PrivacyLabel label_with(std::initializer_list<std::pair<std::string, std::string>> present,
                        LabelOrigin origin = LabelOrigin::Generated) {
  auto label = empty_label(google_schema(), origin);
  for (const auto& [section, attr] : present) label.values.at({section, attr}) = Presence::Present;
  return label;
}

// Two-attribute section used for hand-computed examples.
Section two_attribute_section() {
  Section s;
  s.name = "S";
  s.attributes = {{"A", "a", ValueDomain::Presence, false, std::nullopt},
                  {"B", "b", ValueDomain::YesNo, false, std::nullopt}};
  return s;
}

}  // namespace

TEST(CompareLabels, Tallies) {
  auto generated = label_with({{kFirst, "Email address"}, {kFirst, "Name"}});
  auto truth = label_with({{kFirst, "Email address"}, {kFirst, "Phone number"}},
                          LabelOrigin::GroundTruth);
  auto counts = compare_labels({{generated, truth}}, google_schema(), false);
  EXPECT_EQ(counts.corpus_size, 1u);
  EXPECT_EQ(counts.by_attribute.at({kFirst, "Email address"}), (Confusion{1, 0, 0, 0}));
  EXPECT_EQ(counts.by_attribute.at({kFirst, "Name"}), (Confusion{0, 1, 0, 0}));
  EXPECT_EQ(counts.by_attribute.at({kFirst, "Phone number"}), (Confusion{0, 0, 1, 0}));
  EXPECT_EQ(counts.by_attribute.at({kFirst, "Photos"}), (Confusion{0, 0, 0, 1}));
  for (const auto& [key, c] : counts.by_attribute) EXPECT_EQ(c.total(), 1u);
}

TEST(CompareLabels, ExcludeOmnibus) {
  auto l = label_with({});
  auto all = compare_labels({{l, l}}, google_schema(), false);
  auto trimmed = compare_labels({{l, l}}, google_schema(), true);
  EXPECT_EQ(all.by_attribute.size(), 78u);
  EXPECT_EQ(trimmed.by_attribute.size(), 64u);
  EXPECT_FALSE(trimmed.by_attribute.count({kFirst, "Other info"}));
}

TEST(CompareLabels, SchemaMismatch) {
  auto wrong = empty_label(p2l_test::apple_schema(), LabelOrigin::Generated);
  EXPECT_THROW(compare_labels({{wrong, label_with({})}}, google_schema(), false), SchemaMismatch);
}

TEST(MacroMetrics, HandComputedExample) {
  ConfusionCounts counts;
  counts.corpus_size = 2;
  counts.by_attribute[{"S", "A"}] = {1, 1, 0, 0};
  counts.by_attribute[{"S", "B"}] = {1, 0, 1, 0};
  auto m = macro_metrics(counts, two_attribute_section());
  EXPECT_NEAR(m.precision, 0.75, 1e-12);
  EXPECT_NEAR(m.recall, 0.75, 1e-12);
  EXPECT_NEAR(m.f1, 2.0 / 3.0, 1e-12);
  ASSERT_TRUE(m.accuracy.has_value());
  EXPECT_NEAR(*m.accuracy, 0.5, 1e-12);
  EXPECT_FALSE(m.attributes[0].accuracy.has_value());
}

TEST(MacroMetrics, PerfectPrediction) {
  ConfusionCounts counts;
  counts.corpus_size = 3;
  counts.by_attribute[{"S", "A"}] = {2, 0, 0, 1};
  counts.by_attribute[{"S", "B"}] = {3, 0, 0, 0};
  auto m = macro_metrics(counts, two_attribute_section());
  EXPECT_EQ(m.precision, 1.0);
  EXPECT_EQ(m.recall, 1.0);
  EXPECT_EQ(m.f1, 1.0);
  EXPECT_EQ(m.accuracy, 1.0);
}

TEST(MacroMetrics, ZeroOverlapAndVacuousAttributes) {
  ConfusionCounts counts;
  counts.corpus_size = 4;
  counts.by_attribute[{"S", "A"}] = {0, 0, 2, 2};  // missed everything
  counts.by_attribute[{"S", "B"}] = {0, 0, 0, 4};  // never occurs
  auto m = macro_metrics(counts, two_attribute_section());
  EXPECT_EQ(m.attributes[0].f1, 0.0);
  EXPECT_TRUE(m.attributes[0].included);
  EXPECT_FALSE(m.attributes[1].included);
  EXPECT_EQ(m.f1, 0.0);
  EXPECT_EQ(m.accuracy, 1.0);

  counts.by_attribute[{"S", "A"}] = {0, 0, 0, 4};
  EXPECT_THROW(macro_metrics(counts, two_attribute_section()), EmptySection);
}

TEST(MacroMetrics, SwapSwapsPrecisionAndRecall) {
  std::mt19937 rng(2);
  for (int round = 0; round < 100; ++round) {
    std::vector<LabelPair> pairs, swapped;
    for (int app = 0; app < 5; ++app) {
      auto g = label_with({}), t = label_with({}, LabelOrigin::GroundTruth);
      for (auto* l : {&g, &t}) {
        for (auto& [key, v] : l->values) v = rng() % 3 == 0 ? Presence::Present : Presence::Absent;
      }
      pairs.push_back({g, t});
      swapped.push_back({t, g});
    }
    auto a = compare_labels(pairs, google_schema(), false);
    auto b = compare_labels(swapped, google_schema(), false);
    for (const auto& section : google_schema().sections) {
      auto ma = macro_metrics(a, section), mb = macro_metrics(b, section);
      EXPECT_NEAR(ma.precision, mb.recall, 1e-12);
      EXPECT_NEAR(ma.recall, mb.precision, 1e-12);
      EXPECT_NEAR(ma.f1, mb.f1, 1e-12);
    }
  }
}

TEST(MacroMetrics, PermutationInvariant) {
  std::mt19937 rng(8);
  std::vector<LabelPair> pairs;
  for (int app = 0; app < 8; ++app) {
    auto g = label_with({}), t = label_with({}, LabelOrigin::GroundTruth);
    for (auto* l : {&g, &t}) {
      for (auto& [key, v] : l->values) v = rng() % 2 ? Presence::Present : Presence::Absent;
    }
    pairs.push_back({g, t});
  }
  auto base = compare_labels(pairs, google_schema(), false);
  std::shuffle(pairs.begin(), pairs.end(), rng);
  auto shuffled = compare_labels(pairs, google_schema(), false);
  EXPECT_EQ(base.by_attribute, shuffled.by_attribute);
}

TEST(DetectUnderclaims, MissingLocation) {
  auto truth = label_with({{kFirst, "Email address"}, {kFirst, "Precise location"}},
                          LabelOrigin::GroundTruth);
  auto declared = label_with({{kFirst, "Email address"}}, LabelOrigin::Declared);
  auto generated = label_with({{kFirst, "Email address"}, {kFirst, "Precise location"}});
  auto findings = detect_underclaims("match-masters", truth, declared, generated,
                                     google_schema(), true);
  ASSERT_EQ(findings.size(), 1u);
  EXPECT_EQ(findings[0].attribute, "Precise location");
  EXPECT_TRUE(findings[0].detected);
  EXPECT_EQ(detection_rate(findings), 1.0);
}

TEST(DetectUnderclaims, IdenticalDeclaredHasNoFindings) {
  auto truth = label_with({{kFirst, "Email address"}}, LabelOrigin::GroundTruth);
  auto findings = detect_underclaims("a", truth, truth, label_with({}), google_schema(), true);
  EXPECT_TRUE(findings.empty());
  EXPECT_FALSE(detection_rate(findings).has_value());
}

TEST(DetectUnderclaims, UndetectedGivesZeroRate) {
  auto truth = label_with({{kFirst, "User IDs"}}, LabelOrigin::GroundTruth);
  auto findings =
      detect_underclaims("a", truth, label_with({}), label_with({}), google_schema(), true);
  ASSERT_EQ(findings.size(), 1u);
  EXPECT_FALSE(findings[0].detected);
  EXPECT_EQ(detection_rate(findings), 0.0);
}

TEST(DetectUnderclaims, OmnibusSkippedWhenExcluded) {
  auto truth = label_with({{kFirst, "Other info"}}, LabelOrigin::GroundTruth);
  EXPECT_TRUE(detect_underclaims("a", truth, label_with({}), label_with({}), google_schema(), true)
                  .empty());
  EXPECT_EQ(detect_underclaims("a", truth, label_with({}), label_with({}), google_schema(), false)
                .size(),
            1u);
}

TEST(DetectUnderclaims, FlippingGeneratedNeverLowersRate) {
  std::mt19937 rng(6);
  for (int round = 0; round < 50; ++round) {
    auto truth = label_with({}, LabelOrigin::GroundTruth);
    auto declared = label_with({}, LabelOrigin::Declared);
    auto generated = label_with({});
    for (auto& [k, v] : truth.values) v = rng() % 2 ? Presence::Present : Presence::Absent;
    for (auto& [k, v] : declared.values) v = rng() % 2 ? Presence::Present : Presence::Absent;
    for (auto& [k, v] : generated.values) v = rng() % 2 ? Presence::Present : Presence::Absent;
    auto before = detection_rate(
        detect_underclaims("a", truth, declared, generated, google_schema(), false));
    auto it = std::next(generated.values.begin(), rng() % generated.values.size());
    it->second = Presence::Present;
    auto after = detection_rate(
        detect_underclaims("a", truth, declared, generated, google_schema(), false));
    if (before) EXPECT_GE(*after, *before);
  }
}

TEST(Evaluate, OmnibusExclusionKeepsOtherScores) {
  std::mt19937 rng(12);
  std::vector<AppLabels> apps;
  for (int i = 0; i < 6; ++i) {
    AppLabels a{"app" + std::to_string(i), label_with({}), label_with({}, LabelOrigin::GroundTruth),
                std::nullopt};
    for (auto& [k, v] : a.generated.values) v = rng() % 2 ? Presence::Present : Presence::Absent;
    for (auto& [k, v] : a.truth.values) v = rng() % 2 ? Presence::Present : Presence::Absent;
    apps.push_back(a);
  }
  auto report = evaluate(apps, google_schema());
  ASSERT_EQ(report.metrics.size(), 3u);
  for (std::size_t s = 0; s < 3; ++s) {
    const auto& all = *report.metrics[s].second;
    const auto& trimmed = *report.metrics_without_omnibus[s].second;
    std::size_t omnibus = 0;
    for (const auto& m : all.attributes) {
      auto it = std::find_if(trimmed.attributes.begin(), trimmed.attributes.end(),
                             [&](const AttributeMetrics& t) { return t.attribute == m.attribute; });
      bool is_omni = is_omnibus(*google_schema().sections[s].find(m.attribute));
      if (is_omni) {
        ++omnibus;
        EXPECT_EQ(it, trimmed.attributes.end());
      } else {
        ASSERT_NE(it, trimmed.attributes.end());
        EXPECT_EQ(it->precision, m.precision);
        EXPECT_EQ(it->recall, m.recall);
        EXPECT_EQ(it->f1, m.f1);
      }
    }
    EXPECT_EQ(omnibus, s < 2 ? 7u : 0u);
  }
}

TEST(Evaluate, ReportSerialization) {
  AppLabels a{"x", label_with({{kFirst, "Name"}}), label_with({{kFirst, "Name"}, {kFirst, "Photos"}},
                                                              LabelOrigin::GroundTruth),
              label_with({}, LabelOrigin::Declared)};
  auto report = evaluate({a}, google_schema());
  EXPECT_EQ(report.findings.size(), 2u);
  EXPECT_EQ(report.detection_rate, 0.5);
  auto j = nlohmann::json::parse(to_json(report));
  EXPECT_EQ(j["corpus_size"], 1);
  EXPECT_EQ(j["underclaims"]["detection_rate"], 0.5);
  EXPECT_TRUE(j["metrics"]["Security practices"].is_null());
  EXPECT_EQ(j["metrics"][kFirst]["recall"], 0.5);
  auto text = to_text(report);
  auto header = text.find("section");
  ASSERT_NE(header, std::string::npos);
  auto p = text.find("precision", header), r = text.find("recall", header),
       f = text.find("F1", header), acc = text.find("accuracy", header);
  EXPECT_TRUE(p < r && r < f && f < acc);
}
