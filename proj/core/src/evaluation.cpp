// Copyright 2026 The policy2label Authors
// SPDX-License-Identifier: Apache-2.0

#include "policy2label/evaluation.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "policy2label/errors.hpp"

namespace policy2label {
namespace {

using ordered_json = nlohmann::ordered_json;

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

std::vector<std::pair<std::string, std::optional<SectionMetrics>>> all_sections(
    const ConfusionCounts& counts, const LabelSchema& schema) {
  std::vector<std::pair<std::string, std::optional<SectionMetrics>>> out;
  for (const auto& section : schema.sections) {
    try {
      out.emplace_back(section.name, macro_metrics(counts, section));
    } catch (const EmptySection&) {
      out.emplace_back(section.name, std::nullopt);
    }
  }
  return out;
}

ordered_json optional_number(const std::optional<double>& value) {
  return value ? ordered_json(*value) : ordered_json(nullptr);
}

ordered_json metrics_json(
    const std::vector<std::pair<std::string, std::optional<SectionMetrics>>>& metrics) {
  ordered_json out = ordered_json::object();
  for (const auto& [name, m] : metrics) {
    if (!m) {
      out[name] = nullptr;
      continue;
    }
    ordered_json attributes = ordered_json::array();
    for (const auto& a : m->attributes) {
      attributes.push_back({{"attribute", a.attribute},
                            {"tp", a.counts.tp},
                            {"fp", a.counts.fp},
                            {"fn", a.counts.fn},
                            {"tn", a.counts.tn},
                            {"precision", a.precision},
                            {"recall", a.recall},
                            {"f1", a.f1},
                            {"accuracy", optional_number(a.accuracy)},
                            {"included", a.included}});
    }
    out[name] = {{"precision", m->precision},
                 {"recall", m->recall},
                 {"f1", m->f1},
                 {"accuracy", optional_number(m->accuracy)},
                 {"corpus_size", m->corpus_size},
                 {"attributes", std::move(attributes)}};
  }
  return out;
}

std::string cell(const std::optional<double>& value) {
  if (!value) return "-";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", *value);
  return buf;
}

void render_table(
    std::ostringstream& out,
    const std::vector<std::pair<std::string, std::optional<SectionMetrics>>>& metrics) {
  std::size_t width = 7;
  for (const auto& [name, m] : metrics) width = std::max(width, name.size());
  char line[512];
  std::snprintf(line, sizeof line, "%-*s  %9s  %9s  %9s  %9s\n", static_cast<int>(width),
                "section", "precision", "recall", "F1", "accuracy");
  out << line;
  for (const auto& [name, m] : metrics) {
    std::optional<double> p, r, f, acc;
    if (m) {
      p = m->precision;
      r = m->recall;
      f = m->f1;
      acc = m->accuracy;
    }
    std::snprintf(line, sizeof line, "%-*s  %9s  %9s  %9s  %9s\n", static_cast<int>(width),
                  name.c_str(), cell(p).c_str(), cell(r).c_str(), cell(f).c_str(),
                  cell(acc).c_str());
    out << line;
  }
}

}  // namespace

ConfusionCounts compare_labels(const std::vector<LabelPair>& pairs,
                               const LabelSchema& schema, bool exclude_omnibus) {
  ConfusionCounts counts;
  counts.corpus_size = pairs.size();
  for (const auto& section : schema.sections) {
    for (const auto& a : section.attributes) {
      if (exclude_omnibus && is_omnibus(a)) continue;
      counts.by_attribute[{section.name, a.name}] = {};
    }
  }
  for (const auto& pair : pairs) {
    validate_label(pair.generated, schema);
    validate_label(pair.truth, schema);
    for (auto& [key, c] : counts.by_attribute) {
      bool predicted = pair.generated.get(key) == Presence::Present;
      bool actual = pair.truth.get(key) == Presence::Present;
      if (predicted && actual) {
        ++c.tp;
      } else if (predicted) {
        ++c.fp;
      } else if (actual) {
        ++c.fn;
      } else {
        ++c.tn;
      }
    }
  }
  return counts;
}

AttributeMetrics attribute_metrics(const std::string& name, const Confusion& counts,
                                   ValueDomain domain, std::size_t corpus_size) {
  AttributeMetrics m;
  m.attribute = name;
  m.counts = counts;
  m.included = counts.tp + counts.fp + counts.fn > 0;
  m.precision = ratio(counts.tp, counts.tp + counts.fp);
  m.recall = ratio(counts.tp, counts.tp + counts.fn);
  m.f1 = m.precision + m.recall > 0.0
             ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
             : 0.0;
  if (domain == ValueDomain::YesNo) m.accuracy = ratio(counts.tp + counts.tn, corpus_size);
  return m;
}

SectionMetrics macro_metrics(const ConfusionCounts& counts, const Section& section) {
  SectionMetrics out;
  out.section = section.name;
  out.corpus_size = counts.corpus_size;
  std::size_t included = 0;
  std::size_t yes_no = 0;
  double accuracy_sum = 0.0;
  for (const auto& a : section.attributes) {
    auto it = counts.by_attribute.find({section.name, a.name});
    if (it == counts.by_attribute.end()) continue;
    auto m = attribute_metrics(a.name, it->second, a.value_domain, counts.corpus_size);
    if (m.included) {
      out.precision += m.precision;
      out.recall += m.recall;
      out.f1 += m.f1;
      ++included;
    }
    if (m.accuracy) {
      accuracy_sum += *m.accuracy;
      ++yes_no;
    }
    out.attributes.push_back(std::move(m));
  }
  if (included == 0) {
    throw EmptySection("section \"" + section.name + "\" has no attribute to score");
  }
  out.precision /= static_cast<double>(included);
  out.recall /= static_cast<double>(included);
  out.f1 /= static_cast<double>(included);
  if (yes_no > 0) out.accuracy = accuracy_sum / static_cast<double>(yes_no);
  return out;
}

std::vector<UnderclaimFinding> detect_underclaims(
    const std::string& app_id, const PrivacyLabel& truth, const PrivacyLabel& declared,
    const PrivacyLabel& generated, const LabelSchema& schema, bool exclude_omnibus) {
  validate_label(truth, schema);
  validate_label(declared, schema);
  validate_label(generated, schema);
  std::vector<UnderclaimFinding> findings;
  for (const auto& section : schema.sections) {
    for (const auto& a : section.attributes) {
      if (exclude_omnibus && is_omnibus(a)) continue;
      LabelKey key{section.name, a.name};
      if (truth.get(key) != Presence::Present || declared.get(key) != Presence::Absent) {
        continue;
      }
      UnderclaimFinding f;
      f.app_id = app_id;
      f.section = section.name;
      f.attribute = a.name;
      f.detected = generated.get(key) == Presence::Present;
      if (auto it = generated.provenance.find(key); it != generated.provenance.end()) {
        f.evidence = it->second;
      }
      findings.push_back(std::move(f));
    }
  }
  return findings;
}

std::optional<double> detection_rate(const std::vector<UnderclaimFinding>& findings) {
  if (findings.empty()) return std::nullopt;
  std::size_t detected = 0;
  for (const auto& f : findings) detected += f.detected ? 1 : 0;
  return ratio(detected, findings.size());
}

EvalReport evaluate(const std::vector<AppLabels>& apps, const LabelSchema& schema,
                    bool exclude_omnibus_in_audit) {
  EvalReport report;
  report.schema_ref = schema.ref();
  report.corpus_size = apps.size();
  std::vector<LabelPair> pairs;
  pairs.reserve(apps.size());
  for (const auto& app : apps) pairs.push_back({app.generated, app.truth});
  report.metrics = all_sections(compare_labels(pairs, schema, false), schema);
  report.metrics_without_omnibus = all_sections(compare_labels(pairs, schema, true), schema);
  for (const auto& app : apps) {
    if (!app.declared) continue;
    auto found = detect_underclaims(app.app_id, app.truth, *app.declared, app.generated,
                                    schema, exclude_omnibus_in_audit);
    report.findings.insert(report.findings.end(), std::make_move_iterator(found.begin()),
                           std::make_move_iterator(found.end()));
  }
  report.detection_rate = detection_rate(report.findings);
  return report;
}

std::string to_json(const EvalReport& report) {
  ordered_json findings = ordered_json::array();
  std::size_t detected = 0;
  for (const auto& f : report.findings) {
    ordered_json evidence = ordered_json::array();
    for (const auto& e : f.evidence) {
      evidence.push_back(
          {{"segment_id", e.segment_id}, {"answer", e.answer}, {"group_specific", e.group_specific}});
    }
    findings.push_back({{"app_id", f.app_id},
                        {"section", f.section},
                        {"attribute", f.attribute},
                        {"detected", f.detected},
                        {"evidence", std::move(evidence)}});
    detected += f.detected ? 1 : 0;
  }
  ordered_json out;
  out["schema_ref"] = report.schema_ref;
  out["corpus_size"] = report.corpus_size;
  out["metrics"] = metrics_json(report.metrics);
  out["metrics_without_omnibus"] = metrics_json(report.metrics_without_omnibus);
  out["underclaims"] = {{"total", report.findings.size()},
                        {"detected", detected},
                        {"detection_rate", optional_number(report.detection_rate)},
                        {"findings", std::move(findings)}};
  if (report.cost) {
    out["cost"] = {{"prompts_sent", report.cost->prompts_sent},
                   {"prompt_words", report.cost->prompt_words},
                   {"answer_words", report.cost->answer_words},
                   {"unmatched_lines", report.cost->unmatched_lines}};
  } else {
    out["cost"] = nullptr;
  }
  return out.dump(2, ' ', false, nlohmann::json::error_handler_t::replace) + "\n";
}

std::string to_text(const EvalReport& report) {
  std::ostringstream out;
  out << "schema: " << report.schema_ref << "\n";
  out << "apps: " << report.corpus_size << "\n\n";
  out << "All attributes\n";
  render_table(out, report.metrics);
  out << "\nWithout omnibus attributes\n";
  render_table(out, report.metrics_without_omnibus);
  std::size_t detected = 0;
  for (const auto& f : report.findings) detected += f.detected ? 1 : 0;
  out << "\nUnder-claims: " << report.findings.size() << " found, " << detected
      << " detected, rate " << cell(report.detection_rate) << "\n";
  for (const auto& f : report.findings) {
    out << "  " << f.app_id << "  " << f.section << "/" << f.attribute
        << (f.detected ? "  detected" : "  missed") << "\n";
  }
  if (report.cost) {
    out << "\nCost: " << report.cost->prompts_sent << " prompts, "
        << report.cost->prompt_words << " prompt words, " << report.cost->answer_words
        << " answer words\n";
  }
  return out.str();
}

}  // namespace policy2label
