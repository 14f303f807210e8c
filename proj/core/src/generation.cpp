// Copyright 2026 The policy2label Authors
// SPDX-License-Identifier: Apache-2.0

#include "policy2label/generation.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "policy2label/errors.hpp"
#include "text_match.hpp"

namespace policy2label {
namespace {

// Words reserved for the question and instructions around the context.
constexpr std::size_t kQuestionBudgetWords = 150;

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_words(std::string_view text) {
  std::vector<std::string_view> words;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    std::size_t start = i;
    while (i < text.size() && !is_space(text[i])) ++i;
    if (i > start) words.push_back(text.substr(start, i - start));
  }
  return words;
}

std::string render_template(std::string_view tmpl, std::string_view app_name,
                            std::string_view context, const Attribute& attribute) {
  std::string out;
  std::size_t i = 0;
  while (i < tmpl.size()) {
    if (tmpl[i] != '{') {
      out += tmpl[i++];
      continue;
    }
    auto close = tmpl.find('}', i);
    if (close == std::string_view::npos) {
      throw TemplateError("unterminated placeholder in question template");
    }
    auto name = tmpl.substr(i + 1, close - i - 1);
    if (name == "app_name") {
      out += app_name;
    } else if (name == "context") {
      out += context;
    } else if (name == "attribute_name") {
      out += attribute.name;
    } else if (name == "attribute_description") {
      out += attribute.description;
    } else {
      throw TemplateError("unknown placeholder {" + std::string(name) + "}");
    }
    i = close + 1;
  }
  return out;
}

// A piece of context that is never split further.
struct Unit {
  std::string text;
  std::size_t words = 0;
  std::size_t segment_id = 0;
  bool starts_segment = false;
};

void push_hard_split(std::string_view sentence, std::size_t limit, std::size_t segment_id,
                     bool starts_segment, std::vector<Unit>& units) {
  auto words = split_words(sentence);
  for (std::size_t k = 0; k < words.size(); k += limit) {
    Unit unit;
    unit.segment_id = segment_id;
    unit.starts_segment = starts_segment && k == 0;
    std::size_t end = std::min(words.size(), k + limit);
    for (std::size_t w = k; w < end; ++w) {
      if (w > k) unit.text += ' ';
      unit.text += words[w];
    }
    unit.words = end - k;
    units.push_back(std::move(unit));
  }
}

std::string ask(LlmClient& llm, const Prompt& prompt, const GenerationConfig& config,
                CostStats& cost) {
  for (std::size_t attempt = 0;; ++attempt) {
    ++cost.prompts_sent;
    cost.prompt_words += prompt.word_count;
    try {
      auto answer = llm.complete(prompt.rendered, config.max_answer_words);
      cost.answer_words += count_words(answer);
      return answer;
    } catch (const LlmError& e) {
      if (!e.retryable() || attempt >= config.retries) throw;
    } catch (const std::exception& e) {
      throw LlmError(e.what(), false);
    }
    std::this_thread::sleep_for(config.retry_backoff * (1LL << attempt));
  }
}

struct PairResult {
  Presence presence = Presence::Absent;
  std::vector<Evidence> evidence;
  CostStats cost;
};

struct PairTask {
  const Section* section;
  const Attribute* attribute;
};

// Asks one question per chunk of `segments` and OR-combines the answers.
PairResult answer_over(const std::vector<Segment>& segments, std::string_view app_name,
                       const Section& section, const Attribute& attribute,
                       const GenerationConfig& config, LlmClient& llm) {
  PairResult result;
  if (segments.empty()) return result;
  std::vector<const Segment*> by_id;
  for (const auto& chunk : chunk_context(segments, config.context_word_limit)) {
    auto prompt = render_prompt(app_name, chunk.text, section, attribute);
    auto answer = ask(llm, prompt, config, result.cost);
    if (parse_answer(answer) == Presence::Present) result.presence = Presence::Present;
    for (std::size_t id : chunk.segment_ids) {
      auto it = std::find_if(segments.begin(), segments.end(),
                             [id](const Segment& s) { return s.segment_id == id; });
      result.evidence.push_back({id, answer, mentions_user_group(it->text)});
    }
  }
  return result;
}

template <typename Body>
GenerationResult run_pairs(const LabelSchema& schema, const GenerationConfig& config,
                           Body&& body) {
  validate(config);
  std::vector<PairTask> tasks;
  for (const auto& section : schema.sections) {
    for (const auto& attribute : section.attributes) tasks.push_back({&section, &attribute});
  }

  std::vector<PairResult> results(tasks.size());
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> completed{0};
  std::atomic<bool> abort{false};
  std::mutex error_mutex;
  std::size_t failed_task = tasks.size();
  std::string failure;

  auto worker = [&] {
    while (!abort.load()) {
      std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      try {
        results[i] = body(*tasks[i].section, *tasks[i].attribute);
        completed.fetch_add(1);
      } catch (const std::exception& e) {
        std::lock_guard lock(error_mutex);
        if (i < failed_task) {
          failed_task = i;
          failure = e.what();
        }
        abort.store(true);
      }
    }
  };

  std::size_t workers = std::min(config.max_concurrent_requests, tasks.size());
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }

  if (failed_task < tasks.size()) {
    throw AttributeLlmError(tasks[failed_task].section->name,
                            tasks[failed_task].attribute->name, completed.load(),
                            tasks.size(), failure);
  }

  GenerationResult out;
  out.label = empty_label(schema, LabelOrigin::Generated);
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    LabelKey key{tasks[i].section->name, tasks[i].attribute->name};
    out.label.values[key] = results[i].presence;
    if (!results[i].evidence.empty()) out.label.provenance[key] = std::move(results[i].evidence);
    out.cost += results[i].cost;
  }
  return out;
}

std::string normalize_for_match(std::string_view text) {
  std::string out;
  bool pending = false;
  for (char c : text) {
    if (is_space(c)) {
      pending = !out.empty();
      continue;
    }
    if (pending) out += ' ';
    pending = false;
    out += (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
  }
  return out;
}

// Strips list markers and wrapping quotes from a reply line.
std::string_view clean_reply_line(std::string_view line) {
  line = trim(line);
  if (line.size() >= 2 && (line[0] == '-' || line[0] == '*') && line[1] == ' ') {
    line.remove_prefix(2);
  } else {
    std::size_t digits = 0;
    while (digits < line.size() && line[digits] >= '0' && line[digits] <= '9') ++digits;
    if (digits > 0 && digits + 1 < line.size() &&
        (line[digits] == '.' || line[digits] == ')') && line[digits + 1] == ' ') {
      line.remove_prefix(digits + 2);
    }
  }
  line = trim(line);
  if (line.size() >= 2 && line.front() == '"' && line.back() == '"') {
    line = line.substr(1, line.size() - 2);
  }
  return trim(line);
}

bool is_none_reply(std::string_view line) {
  auto lowered = detail::ascii_lower(line);
  while (!lowered.empty() && (lowered.back() == '.' || lowered.back() == '!')) {
    lowered.pop_back();
  }
  return lowered == "none";
}

}  // namespace

std::string_view to_string(Strategy strategy) {
  return strategy == Strategy::FullLlm ? "full-llm" : "hybrid";
}

void validate(const GenerationConfig& config) {
  if (config.context_word_limit == 0) {
    throw std::invalid_argument("context word limit must be positive");
  }
  if (config.max_concurrent_requests == 0) {
    throw std::invalid_argument("at least one concurrent request is required");
  }
  if (config.max_answer_words <= 0) {
    throw std::invalid_argument("answer budget must be positive");
  }
  if (config.context_word_limit + kQuestionBudgetWords +
          static_cast<std::size_t>(config.max_answer_words) >
      config.model_window_words) {
    throw std::invalid_argument(
        "context word limit " + std::to_string(config.context_word_limit) +
        " leaves no room for question and answer in a " +
        std::to_string(config.model_window_words) + "-word model window");
  }
}

CostStats& CostStats::operator+=(const CostStats& other) {
  prompts_sent += other.prompts_sent;
  prompt_words += other.prompt_words;
  answer_words += other.answer_words;
  unmatched_lines += other.unmatched_lines;
  return *this;
}

Prompt render_prompt(std::string_view app_name, std::string_view context,
                     const Section& section, const Attribute& attribute) {
  Prompt prompt;
  prompt.app_name = app_name;
  prompt.context = context;
  prompt.rendered = render_template(section.question_template, app_name, context, attribute);
  std::string_view tmpl = section.question_template;
  auto at = tmpl.find("{context}");
  std::string question =
      at == std::string_view::npos
          ? prompt.rendered
          : render_template(tmpl.substr(at + 9), app_name, context, attribute);
  std::string_view q = trim(question);
  if (q.rfind("Question:", 0) == 0) q = trim(q.substr(9));
  prompt.question = q;
  prompt.word_count = count_words(prompt.rendered);
  return prompt;
}

Prompt build_prompt(std::string_view app_name, const std::vector<Segment>& segments,
                    const Section& section, const Attribute& attribute) {
  std::string context;
  for (const auto& s : segments) {
    if (!context.empty()) context += "\n\n";
    context += s.text;
  }
  if (context.empty()) context = kNoContextPlaceholder;
  return render_prompt(app_name, context, section, attribute);
}

std::vector<ContextChunk> chunk_context(const std::vector<Segment>& segments,
                                        std::size_t word_limit) {
  if (word_limit == 0) throw std::invalid_argument("chunk word limit must be positive");

  std::vector<Unit> units;
  for (const auto& s : segments) {
    std::size_t words = count_words(s.text);
    if (words == 0) continue;
    if (words <= word_limit) {
      units.push_back({s.text, words, s.segment_id, true});
      continue;
    }
    bool first = true;
    for (const auto& sentence : split_block(s.text, AbbreviationTable::builtin())) {
      std::size_t sw = count_words(sentence.text);
      if (sw <= word_limit) {
        units.push_back({sentence.text, sw, s.segment_id, first});
      } else {
        push_hard_split(sentence.text, word_limit, s.segment_id, first, units);
      }
      first = false;
    }
  }

  std::vector<ContextChunk> chunks;
  for (auto& unit : units) {
    if (chunks.empty() || chunks.back().word_count + unit.words > word_limit) {
      chunks.emplace_back();
    }
    auto& chunk = chunks.back();
    if (!chunk.text.empty()) chunk.text += unit.starts_segment ? "\n\n" : " ";
    chunk.text += unit.text;
    chunk.word_count += unit.words;
    if (chunk.segment_ids.empty() || chunk.segment_ids.back() != unit.segment_id) {
      chunk.segment_ids.push_back(unit.segment_id);
    }
  }
  return chunks;
}

Presence parse_answer(std::string_view answer) {
  std::size_t i = 0;
  auto is_alnum = [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
  };
  while (i < answer.size() && !is_alnum(answer[i])) ++i;
  std::size_t start = i;
  while (i < answer.size() && ((answer[i] >= 'a' && answer[i] <= 'z') ||
                               (answer[i] >= 'A' && answer[i] <= 'Z'))) {
    ++i;
  }
  return detail::ascii_lower(answer.substr(start, i - start)) == "yes" ? Presence::Present
                                                                     : Presence::Absent;
}

bool mentions_user_group(std::string_view text) {
  auto lowered = detail::ascii_lower(text);
  return detail::contains_at_word_start(lowered, "child") ||
         detail::contains_at_word_start(lowered, "under 13") ||
         detail::contains_word(lowered, "california") || detail::contains_word(lowered, "eea") ||
         detail::contains_word(lowered, "european");
}

GenerationResult generate_label(const std::vector<Segment>& segments,
                                std::string_view app_name, const LabelSchema& schema,
                                const GenerationConfig& config, LlmClient& llm) {
  return run_pairs(schema, config, [&](const Section& section, const Attribute& attribute) {
    auto selected = select_segments(schema, section, attribute, segments);
    return answer_over(selected, app_name, section, attribute, config, llm);
  });
}

std::vector<Segment> retrieve_relevant(const std::vector<Sentence>& sentences,
                                       std::string_view question,
                                       const GenerationConfig& config, LlmClient& llm,
                                       CostStats* cost) {
  std::vector<Segment> units;
  units.reserve(sentences.size());
  for (const auto& sentence : sentences) {
    Segment s;
    s.segment_id = sentence.index;
    s.first_sentence = sentence.index;
    s.sentence_count = 1;
    s.text = sentence.text;
    units.push_back(std::move(s));
  }
  auto chunks = chunk_context(units, config.context_word_limit);
  std::map<std::size_t, std::string> normalized;
  for (const auto& s : units) normalized.emplace(s.segment_id, normalize_for_match(s.text));

  CostStats local;
  std::set<std::size_t> matched;
  for (std::size_t c = 0; c < chunks.size(); ++c) {
    std::ostringstream text;
    text << "Here is part " << (c + 1) << " of " << chunks.size() << " of a privacy policy.\n"
         << chunks[c].text << "\nQuestion: " << question << "\n"
         << kRetrievalInstruction;
    Prompt prompt;
    prompt.question = question;
    prompt.context = chunks[c].text;
    prompt.rendered = text.str();
    prompt.word_count = count_words(prompt.rendered);
    auto reply = ask(llm, prompt, config, local);

    std::vector<std::pair<std::size_t, std::string>> candidates;
    for (std::size_t id : chunks[c].segment_ids) {
      candidates.emplace_back(id, normalized.at(id));
    }
    std::istringstream lines(reply);
    for (std::string raw; std::getline(lines, raw);) {
      auto line = clean_reply_line(raw);
      if (line.empty() || is_none_reply(line)) continue;
      auto needle = normalize_for_match(line);
      bool found = false;
      for (const auto& [id, sentence] : candidates) {
        if (sentence.find(needle) != std::string::npos ||
            needle.find(sentence) != std::string::npos) {
          matched.insert(id);
          found = true;
          if (sentence.find(needle) != std::string::npos) break;
        }
      }
      if (!found) ++local.unmatched_lines;
    }
  }
  if (cost) *cost += local;

  std::vector<Segment> out;
  for (const auto& s : units) {
    if (matched.count(s.segment_id)) out.push_back(s);
  }
  return out;
}

GenerationResult generate_label_full_llm(const std::vector<Sentence>& sentences,
                                         std::string_view app_name,
                                         const LabelSchema& schema,
                                         const GenerationConfig& config,
                                         LlmClient& retriever, LlmClient& answerer) {
  return run_pairs(schema, config, [&](const Section& section, const Attribute& attribute) {
    auto question = render_prompt(app_name, "", section, attribute).question;
    CostStats retrieval;
    auto relevant = retrieve_relevant(sentences, question, config, retriever, &retrieval);
    auto result = answer_over(relevant, app_name, section, attribute, config, answerer);
    result.cost += retrieval;
    return result;
  });
}

}  // namespace policy2label
