// Copyright 2026 The policy2label Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "policy2label/category.hpp"
#include "policy2label/document.hpp"

namespace policy2label {

enum class ValueDomain { Presence, YesNo };

struct Attribute {
  std::string name;
  std::string description;
  ValueDomain value_domain = ValueDomain::Presence;
  bool omnibus = false;
  /// Narrows the section's mapping for this attribute when set.
  std::optional<CategorySet> mapped_categories;
};

/// True iff `name` or `description` contains the word "other" (or "others"),
/// case-insensitively. This is the default omnibus flag.
bool mentions_other(std::string_view name, std::string_view description);

inline bool is_omnibus(const Attribute& attribute) { return attribute.omnibus; }

struct Section {
  std::string name;
  std::vector<Attribute> attributes;
  CategorySet mapped_categories;
  /// Full prompt template. Placeholders: {app_name}, {context},
  /// {attribute_name}, {attribute_description}.
  std::string question_template;

  const Attribute* find(std::string_view attribute) const;
  /// The attribute's own mapping if it has one, else the section's.
  const CategorySet& categories_for(const Attribute& attribute) const {
    return attribute.mapped_categories ? *attribute.mapped_categories : mapped_categories;
  }
};

/// A platform label format: which sections exist, which attributes each
/// section has, and which data-practice categories feed each section.
struct LabelSchema {
  std::string platform_id;
  std::string version;
  std::vector<Section> sections;

  /// "<platform_id>@<version>"
  std::string ref() const { return platform_id + "@" + version; }
  const Section* find(std::string_view section) const;
  std::size_t pair_count() const;
};

/// The template used when a schema section does not define one.
/// `verb_phrase` describes the practice, e.g. "collects".
std::string default_question_template(std::string_view verb_phrase);

/// Throws SchemaInvalid for malformed JSON, duplicate names, empty or
/// unknown categories, empty descriptions, or '/' in a section name.
LabelSchema parse_schema(std::string_view json);
LabelSchema load_schema(const std::filesystem::path& path);
/// Canonical form: keys sorted, two-space indent, omnibus always written.
std::string to_json(const LabelSchema& schema);

/// Segments whose categories intersect the section's mapping, in input order.
std::vector<Segment> select_segments(const LabelSchema& schema,
                                     const Section& section,
                                     const std::vector<Segment>& segments);

/// As above, using the attribute's mapping when it narrows the section's.
std::vector<Segment> select_segments(const LabelSchema& schema, const Section& section,
                                     const Attribute& attribute,
                                     const std::vector<Segment>& segments);

// Labels.

enum class Presence { Absent, Present };
enum class LabelOrigin { Generated, Declared, GroundTruth };

std::string_view to_string(Presence presence);
std::string_view to_string(LabelOrigin origin);

struct LabelKey {
  std::string section;
  std::string attribute;

  /// "<section>/<attribute>"
  std::string str() const { return section + "/" + attribute; }
  friend auto operator<=>(const LabelKey&, const LabelKey&) = default;
};

/// One raw answer and the segment it was grounded on.
struct Evidence {
  std::size_t segment_id = 0;
  std::string answer;
  /// The segment mentions a specific user group (children, residents of a
  /// region); such answers are advisory.
  bool group_specific = false;

  friend bool operator==(const Evidence&, const Evidence&) = default;
};

struct PrivacyLabel {
  std::string schema_ref;
  LabelOrigin origin = LabelOrigin::Generated;
  std::map<LabelKey, Presence> values;
  std::map<LabelKey, std::vector<Evidence>> provenance;

  Presence get(const LabelKey& key) const;
};

/// A label for `schema` with every pair set to Absent.
PrivacyLabel empty_label(const LabelSchema& schema, LabelOrigin origin);

/// Throws SchemaMismatch unless the label references `schema` and covers its
/// (section, attribute) pairs exactly.
void validate_label(const PrivacyLabel& label, const LabelSchema& schema);

PrivacyLabel parse_label(std::string_view json);
PrivacyLabel load_label(const std::filesystem::path& path);
std::string to_json(const PrivacyLabel& label);

}  // namespace policy2label
