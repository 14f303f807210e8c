// Copyright 2026 The policy2label Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>

#include <gtest/gtest.h>

#include "policy2label/errors.hpp"
#include "policy2label/schema.hpp"
#include "test_util.hpp"

using namespace policy2label;
using C = DataPracticeCategory;
using p2l_test::apple_schema;
using p2l_test::google_schema;

namespace {

std::string minimal_schema(const std::string& attributes,
                           const std::string& categories = R"(["Data Security"])") {
  return R"({"platform_id": "t", "version": "1", "sections": [{"name": "S",
    "mapped_categories": )" + categories + R"(, "attributes": [)" + attributes + "]}]}";
}

Segment seg(std::size_t id, CategorySet cats) {
  Segment s;
  s.segment_id = id;
  s.sentence_count = 1;
  s.text = "segment " + std::to_string(id);
  s.categories = cats;
  return s;
}

}  // namespace

TEST(GoogleSchema, Shape) {
  const auto& s = google_schema();
  EXPECT_EQ(s.platform_id, "google-data-safety");
  ASSERT_EQ(s.sections.size(), 3u);
  EXPECT_EQ(s.sections[0].attributes.size(), 38u);
  EXPECT_EQ(s.sections[1].attributes.size(), 38u);
  ASSERT_EQ(s.sections[2].attributes.size(), 2u);
  const auto& enc = s.sections[2].attributes[0];
  const auto& rtbf = s.sections[2].attributes[1];
  EXPECT_EQ(enc.name, "Encryption");
  EXPECT_EQ(enc.description, "Data is encrypted in transit");
  EXPECT_EQ(enc.value_domain, ValueDomain::YesNo);
  EXPECT_EQ(rtbf.name, "RTBF");
  EXPECT_EQ(rtbf.description, "You can request that data be deleted");
  EXPECT_EQ(rtbf.value_domain, ValueDomain::YesNo);
  EXPECT_EQ(s.sections[0].mapped_categories, CategorySet({C::FirstPartyCollection}));
  EXPECT_EQ(s.sections[1].mapped_categories, CategorySet({C::ThirdPartySharing}));
  EXPECT_EQ(s.sections[2].categories_for(enc), CategorySet({C::DataSecurity}));
  EXPECT_EQ(s.sections[2].categories_for(rtbf),
            CategorySet({C::UserAccessEditDeletion, C::DataRetention}));
  EXPECT_EQ(s.pair_count(), 78u);
}

TEST(GoogleSchema, FourteenOmnibusAttributes) {
  const auto& s = google_schema();
  std::size_t total = 0;
  for (std::size_t k = 0; k < 2; ++k) {
    auto n = std::count_if(s.sections[k].attributes.begin(), s.sections[k].attributes.end(),
                           [](const Attribute& a) { return is_omnibus(a); });
    EXPECT_EQ(n, 7) << s.sections[k].name;
    total += static_cast<std::size_t>(n);
  }
  EXPECT_EQ(total, 14u);
  EXPECT_TRUE(is_omnibus(*s.sections[0].find("Other info")));
  EXPECT_TRUE(is_omnibus(*s.sections[0].find("Other in-app messages")));
  EXPECT_FALSE(is_omnibus(*s.sections[0].find("Email address")));
  EXPECT_FALSE(is_omnibus(*s.sections[0].find("Device or other IDs")));
}

TEST(AppleSchema, ThreeSectionsOfThirteen) {
  const auto& s = apple_schema();
  ASSERT_EQ(s.sections.size(), 3u);
  for (const auto& section : s.sections) {
    EXPECT_EQ(section.attributes.size(), 13u) << section.name;
    for (const auto& a : section.attributes) EXPECT_EQ(a.value_domain, ValueDomain::Presence);
  }
  EXPECT_EQ(s.sections[0].mapped_categories,
            CategorySet({C::FirstPartyCollection, C::ThirdPartySharing}));
  EXPECT_EQ(s.sections[2].mapped_categories, CategorySet({C::ThirdPartySharing}));
}

TEST(OmnibusDefault, WordOther) {
  EXPECT_TRUE(mentions_other("Other Info", "Any other personal information"));
  EXPECT_TRUE(mentions_other("Other In-app Messages", "Any other types of messages"));
  EXPECT_TRUE(mentions_other("X", "and OTHERS"));
  EXPECT_FALSE(mentions_other("Email Address", "A user's email address."));
  EXPECT_FALSE(mentions_other("Mother's name", "otherwise unused"));
}

TEST(ParseSchema, OmnibusDefaultAndOverride) {
  auto s = parse_schema(minimal_schema(
      R"({"name": "Other stuff", "description": "d", "value_domain": "Presence"},
         {"name": "Plain", "description": "any other", "value_domain": "YesNo", "omnibus": false},
         {"name": "Flagged", "description": "d", "value_domain": "Presence", "omnibus": true})"));
  const auto& a = s.sections[0].attributes;
  EXPECT_TRUE(a[0].omnibus);
  EXPECT_FALSE(a[1].omnibus);
  EXPECT_TRUE(a[2].omnibus);
}

TEST(ParseSchema, Rejections) {
  const std::string attr = R"({"name": "Email Address", "description": "d", "value_domain": "Presence"})";
  EXPECT_THROW(parse_schema(minimal_schema(attr + "," + attr)), SchemaInvalid);
  EXPECT_THROW(parse_schema(minimal_schema(attr, "[]")), SchemaInvalid);
  EXPECT_THROW(parse_schema(minimal_schema(attr, R"(["Nope"])")), SchemaInvalid);
  EXPECT_THROW(parse_schema("{not json"), SchemaInvalid);
  EXPECT_THROW(parse_schema(minimal_schema(
                   R"({"name": "A", "description": "", "value_domain": "Presence"})")),
               SchemaInvalid);
  EXPECT_THROW(parse_schema(minimal_schema(
                   R"({"name": "A", "description": "d", "value_domain": "Maybe"})")),
               SchemaInvalid);
  auto twice = R"({"platform_id": "t", "version": "1", "sections": [
    {"name": "S", "mapped_categories": ["Data Security"], "attributes": []},
    {"name": "S", "mapped_categories": ["Data Security"], "attributes": []}]})";
  EXPECT_THROW(parse_schema(twice), SchemaInvalid);
  EXPECT_THROW(load_schema(p2l_test::kSchemas / "missing.json"), SchemaInvalid);
}

TEST(ParseSchema, DefaultTemplate) {
  auto s = parse_schema(minimal_schema(
      R"({"name": "A", "description": "d", "value_domain": "Presence"})",
      R"(["First-Party Collection/Use"])"));
  EXPECT_EQ(s.sections[0].question_template, default_question_template("collects"));
  EXPECT_NE(s.sections[0].question_template.find("{context}"), std::string::npos);
}

TEST(SchemaJson, CanonicalRoundTrip) {
  for (const auto* schema : {&google_schema(), &apple_schema()}) {
    auto canonical = to_json(*schema);
    EXPECT_EQ(to_json(parse_schema(canonical)), canonical);
  }
}

TEST(SchemaJson, BundledFilesAreCanonical) {
  for (const char* name : {"google-data-safety.json", "apple-app-privacy.json"}) {
    auto text = p2l_test::read_file(p2l_test::kSchemas / name);
    EXPECT_EQ(to_json(parse_schema(text)), text) << name;
  }
}

TEST(SelectSegments, FirstPartyOnly) {
  const auto& s = google_schema();
  std::vector<Segment> segs{seg(0, {C::FirstPartyCollection}), seg(1, {C::ThirdPartySharing})};
  auto out = select_segments(s, s.sections[0], segs);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].segment_id, 0u);
}

TEST(SelectSegments, RetentionFeedsRtbf) {
  const auto& s = google_schema();
  const auto& security = s.sections[2];
  std::vector<Segment> segs{seg(0, {C::DataRetention}), seg(1, {C::DataSecurity})};
  auto rtbf = select_segments(s, security, *security.find("RTBF"), segs);
  ASSERT_EQ(rtbf.size(), 1u);
  EXPECT_EQ(rtbf[0].segment_id, 0u);
  auto enc = select_segments(s, security, *security.find("Encryption"), segs);
  ASSERT_EQ(enc.size(), 1u);
  EXPECT_EQ(enc[0].segment_id, 1u);
  EXPECT_EQ(select_segments(s, security, segs).size(), 2u);
}

TEST(SelectSegments, EmptyAndSubsequence) {
  const auto& s = google_schema();
  std::vector<Segment> segs{seg(0, {C::DoNotTrack}), seg(1, {})};
  EXPECT_TRUE(select_segments(s, s.sections[0], segs).empty());
  std::vector<Segment> many;
  for (std::size_t i = 0; i < 20; ++i) {
    many.push_back(seg(i, i % 3 == 0 ? CategorySet({C::FirstPartyCollection}) : CategorySet{}));
  }
  auto out = select_segments(s, s.sections[0], many);
  ASSERT_EQ(out.size(), 7u);
  for (std::size_t k = 0; k < out.size(); ++k) EXPECT_EQ(out[k].segment_id, 3 * k);
}

TEST(Label, EmptyLabelValidates) {
  auto label = empty_label(google_schema(), LabelOrigin::Generated);
  EXPECT_EQ(label.values.size(), google_schema().pair_count());
  EXPECT_NO_THROW(validate_label(label, google_schema()));
  EXPECT_THROW(validate_label(label, apple_schema()), SchemaMismatch);
}

TEST(Label, GapsAndExtrasRejected) {
  auto label = empty_label(google_schema(), LabelOrigin::Declared);
  auto gap = label;
  gap.values.erase(gap.values.begin());
  EXPECT_THROW(validate_label(gap, google_schema()), SchemaMismatch);
  auto extra = label;
  extra.values[{"Security practices", "Bogus"}] = Presence::Absent;
  EXPECT_THROW(validate_label(extra, google_schema()), SchemaMismatch);
}

TEST(Label, JsonRoundTrip) {
  auto label = empty_label(google_schema(), LabelOrigin::GroundTruth);
  LabelKey key{"First-party data collected", "Email address"};
  label.values[key] = Presence::Present;
  label.provenance[key] = {{3, "Yes, it does.", false}, {4, "No", true}};
  auto text = to_json(label);
  auto back = parse_label(text);
  EXPECT_EQ(back.values, label.values);
  EXPECT_EQ(back.provenance, label.provenance);
  EXPECT_EQ(back.origin, LabelOrigin::GroundTruth);
  EXPECT_EQ(to_json(back), text);
  EXPECT_NE(text.find("\"First-party data collected/Email address\": \"Present\""),
            std::string::npos);
}
