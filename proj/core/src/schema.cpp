// Copyright 2026 The policy2label Authors
// SPDX-License-Identifier: Apache-2.0

#include "policy2label/schema.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "policy2label/errors.hpp"
#include "text_match.hpp"

namespace policy2label {
namespace {

using nlohmann::json;

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string_view to_string(ValueDomain domain) {
  return domain == ValueDomain::YesNo ? "YesNo" : "Presence";
}

ValueDomain parse_domain(const std::string& text) {
  if (text == "Presence") return ValueDomain::Presence;
  if (text == "YesNo") return ValueDomain::YesNo;
  throw SchemaInvalid("unknown value_domain \"" + text + "\"");
}

std::string verb_for(const CategorySet& categories) {
  if (categories.contains(DataPracticeCategory::FirstPartyCollection)) return "collects";
  if (categories.contains(DataPracticeCategory::ThirdPartySharing)) {
    return "shares with third parties";
  }
  return "provides";
}

CategorySet parse_categories(const json& names, const std::string& owner) {
  CategorySet set;
  for (const auto& name : names) {
    auto c = parse_category(name.get<std::string>());
    if (!c) {
      throw SchemaInvalid(owner + ": unknown category \"" + name.get<std::string>() + "\"");
    }
    set.insert(*c);
  }
  if (set.empty()) throw SchemaInvalid(owner + " maps to no category");
  return set;
}

json categories_json(const CategorySet& set) {
  json out = json::array();
  for (auto c : set.members()) out.push_back(std::string(category_name(c)));
  return out;
}

Section parse_section(const json& entry) {
  Section section;
  section.name = entry.at("name").get<std::string>();
  if (section.name.empty()) throw SchemaInvalid("section with an empty name");
  if (section.name.find('/') != std::string::npos) {
    throw SchemaInvalid("section name \"" + section.name + "\" contains '/'");
  }
  section.mapped_categories =
      parse_categories(entry.at("mapped_categories"), "section \"" + section.name + "\"");
  section.question_template = entry.value("question_template", std::string());
  if (section.question_template.empty()) {
    section.question_template = default_question_template(verb_for(section.mapped_categories));
  }

  std::set<std::string> seen;
  for (const auto& a : entry.at("attributes")) {
    Attribute attribute;
    attribute.name = a.at("name").get<std::string>();
    attribute.description = a.at("description").get<std::string>();
    attribute.value_domain = parse_domain(a.at("value_domain").get<std::string>());
    if (attribute.name.empty()) {
      throw SchemaInvalid("section \"" + section.name + "\": attribute with an empty name");
    }
    if (attribute.description.empty()) {
      throw SchemaInvalid("attribute \"" + attribute.name + "\" has no description");
    }
    if (!seen.insert(attribute.name).second) {
      throw SchemaInvalid("section \"" + section.name + "\": duplicate attribute \"" +
                          attribute.name + "\"");
    }
    attribute.omnibus = a.contains("omnibus")
                            ? a.at("omnibus").get<bool>()
                            : mentions_other(attribute.name, attribute.description);
    if (a.contains("mapped_categories")) {
      attribute.mapped_categories =
          parse_categories(a.at("mapped_categories"), "attribute \"" + attribute.name + "\"");
    }
    section.attributes.push_back(std::move(attribute));
  }
  return section;
}

}  // namespace

bool mentions_other(std::string_view name, std::string_view description) {
  for (auto text : {name, description}) {
    auto lowered = detail::ascii_lower(text);
    if (detail::contains_word(lowered, "other") || detail::contains_word(lowered, "others")) {
      return true;
    }
  }
  return false;
}

std::string default_question_template(std::string_view verb_phrase) {
  return "App name: {app_name}.\nPrivacy policy excerpts:\n{context}\n"
         "Question: Does this privacy policy state that the app " +
         std::string(verb_phrase) +
         " {attribute_name} ({attribute_description})? Answer yes or no.";
}

const Attribute* Section::find(std::string_view attribute) const {
  for (const auto& a : attributes) {
    if (a.name == attribute) return &a;
  }
  return nullptr;
}

const Section* LabelSchema::find(std::string_view section) const {
  for (const auto& s : sections) {
    if (s.name == section) return &s;
  }
  return nullptr;
}

std::size_t LabelSchema::pair_count() const {
  std::size_t n = 0;
  for (const auto& s : sections) n += s.attributes.size();
  return n;
}

LabelSchema parse_schema(std::string_view text) {
  try {
    auto doc = json::parse(text);
    LabelSchema schema;
    schema.platform_id = doc.at("platform_id").get<std::string>();
    schema.version = doc.at("version").get<std::string>();
    std::set<std::string> seen;
    for (const auto& entry : doc.at("sections")) {
      auto section = parse_section(entry);
      if (!seen.insert(section.name).second) {
        throw SchemaInvalid("duplicate section \"" + section.name + "\"");
      }
      schema.sections.push_back(std::move(section));
    }
    if (schema.sections.empty()) throw SchemaInvalid("schema has no sections");
    return schema;
  } catch (const json::exception& e) {
    throw SchemaInvalid(std::string("malformed schema: ") + e.what());
  }
}

LabelSchema load_schema(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_text(path);
  } catch (const IoError& e) {
    throw SchemaInvalid(e.what());
  }
  return parse_schema(text);
}

std::string to_json(const LabelSchema& schema) {
  json doc;
  doc["platform_id"] = schema.platform_id;
  doc["version"] = schema.version;
  doc["sections"] = json::array();
  for (const auto& section : schema.sections) {
    json s;
    s["name"] = section.name;
    s["question_template"] = section.question_template;
    s["mapped_categories"] = categories_json(section.mapped_categories);
    s["attributes"] = json::array();
    for (const auto& a : section.attributes) {
      json attribute = {{"name", a.name},
                        {"description", a.description},
                        {"value_domain", std::string(to_string(a.value_domain))},
                        {"omnibus", a.omnibus}};
      if (a.mapped_categories) {
        attribute["mapped_categories"] = categories_json(*a.mapped_categories);
      }
      s["attributes"].push_back(std::move(attribute));
    }
    doc["sections"].push_back(std::move(s));
  }
  return doc.dump(2, ' ', false, json::error_handler_t::replace) + "\n";
}

std::vector<Segment> select_segments(const LabelSchema& /*schema*/, const Section& section,
                                     const std::vector<Segment>& segments) {
  std::vector<Segment> selected;
  for (const auto& s : segments) {
    if (s.categories.intersects(section.mapped_categories)) selected.push_back(s);
  }
  return selected;
}

std::vector<Segment> select_segments(const LabelSchema& /*schema*/, const Section& section,
                                     const Attribute& attribute,
                                     const std::vector<Segment>& segments) {
  const CategorySet& wanted = section.categories_for(attribute);
  std::vector<Segment> selected;
  for (const auto& s : segments) {
    if (s.categories.intersects(wanted)) selected.push_back(s);
  }
  return selected;
}

// Labels.

std::string_view to_string(Presence presence) {
  return presence == Presence::Present ? "Present" : "Absent";
}

std::string_view to_string(LabelOrigin origin) {
  switch (origin) {
    case LabelOrigin::Generated:
      return "Generated";
    case LabelOrigin::Declared:
      return "Declared";
    case LabelOrigin::GroundTruth:
      return "GroundTruth";
  }
  return "Generated";
}

Presence PrivacyLabel::get(const LabelKey& key) const {
  auto it = values.find(key);
  if (it == values.end()) throw SchemaMismatch("label has no value for " + key.str());
  return it->second;
}

PrivacyLabel empty_label(const LabelSchema& schema, LabelOrigin origin) {
  PrivacyLabel label;
  label.schema_ref = schema.ref();
  label.origin = origin;
  for (const auto& section : schema.sections) {
    for (const auto& a : section.attributes) {
      label.values[{section.name, a.name}] = Presence::Absent;
    }
  }
  return label;
}

void validate_label(const PrivacyLabel& label, const LabelSchema& schema) {
  if (label.schema_ref != schema.ref()) {
    throw SchemaMismatch("label references \"" + label.schema_ref + "\", expected \"" +
                         schema.ref() + "\"");
  }
  for (const auto& section : schema.sections) {
    for (const auto& a : section.attributes) {
      if (!label.values.count({section.name, a.name})) {
        throw SchemaMismatch("label lacks " + section.name + "/" + a.name);
      }
    }
  }
  if (label.values.size() != schema.pair_count()) {
    for (const auto& [key, value] : label.values) {
      const Section* s = schema.find(key.section);
      if (!s || !s->find(key.attribute)) {
        throw SchemaMismatch("label has unknown attribute " + key.str());
      }
    }
  }
  for (const auto& [key, evidence] : label.provenance) {
    if (!label.values.count(key)) {
      throw SchemaMismatch("provenance for unknown attribute " + key.str());
    }
  }
}

PrivacyLabel parse_label(std::string_view text) {
  try {
    auto doc = json::parse(text);
    PrivacyLabel label;
    label.schema_ref = doc.at("schema_ref").get<std::string>();
    auto origin = doc.at("origin").get<std::string>();
    if (origin == "Generated") {
      label.origin = LabelOrigin::Generated;
    } else if (origin == "Declared") {
      label.origin = LabelOrigin::Declared;
    } else if (origin == "GroundTruth") {
      label.origin = LabelOrigin::GroundTruth;
    } else {
      throw SchemaMismatch("unknown label origin \"" + origin + "\"");
    }
    auto split_key = [](const std::string& key) {
      auto slash = key.find('/');
      if (slash == std::string::npos) {
        throw SchemaMismatch("label key \"" + key + "\" is not <section>/<attribute>");
      }
      return LabelKey{key.substr(0, slash), key.substr(slash + 1)};
    };
    for (const auto& [key, value] : doc.at("values").items()) {
      auto v = value.get<std::string>();
      if (v != "Present" && v != "Absent") {
        throw SchemaMismatch("value for " + key + " must be Present or Absent");
      }
      label.values[split_key(key)] = v == "Present" ? Presence::Present : Presence::Absent;
    }
    if (doc.contains("provenance") && !doc.at("provenance").is_null()) {
      for (const auto& [key, entries] : doc.at("provenance").items()) {
        auto& list = label.provenance[split_key(key)];
        for (const auto& e : entries) {
          list.push_back({e.at("segment_id").get<std::size_t>(),
                          e.at("answer").get<std::string>(),
                          e.value("group_specific", false)});
        }
      }
    }
    return label;
  } catch (const json::exception& e) {
    throw SchemaMismatch(std::string("malformed label: ") + e.what());
  }
}

PrivacyLabel load_label(const std::filesystem::path& path) {
  return parse_label(read_text(path));
}

std::string to_json(const PrivacyLabel& label) {
  json doc;
  doc["schema_ref"] = label.schema_ref;
  doc["origin"] = std::string(to_string(label.origin));
  doc["values"] = json::object();
  for (const auto& [key, value] : label.values) {
    doc["values"][key.str()] = std::string(to_string(value));
  }
  if (!label.provenance.empty()) {
    json provenance = json::object();
    for (const auto& [key, entries] : label.provenance) {
      json list = json::array();
      for (const auto& e : entries) {
        list.push_back({{"segment_id", e.segment_id},
                        {"answer", e.answer},
                        {"group_specific", e.group_specific}});
      }
      provenance[key.str()] = std::move(list);
    }
    doc["provenance"] = std::move(provenance);
  }
  return doc.dump(2, ' ', false, json::error_handler_t::replace) + "\n";
}

}  // namespace policy2label
