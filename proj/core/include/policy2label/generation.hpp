// Copyright 2026 The policy2label Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "policy2label/document.hpp"
#include "policy2label/llm.hpp"
#include "policy2label/schema.hpp"

namespace policy2label {

enum class Strategy { Hybrid, FullLlm };

std::string_view to_string(Strategy strategy);

struct GenerationConfig {
  Strategy strategy = Strategy::Hybrid;
  std::size_t context_word_limit = 1200;
  std::size_t max_concurrent_requests = 4;
  std::size_t retries = 2;
  /// First retry delay; doubles on every further attempt.
  std::chrono::milliseconds retry_backoff{200};
  int max_answer_words = 32;
  /// Model input window in words. context_word_limit plus the question and
  /// answer budget has to fit inside it.
  std::size_t model_window_words = 1500;
};

/// Throws std::invalid_argument when the limits are inconsistent.
void validate(const GenerationConfig& config);

struct Prompt {
  std::string app_name;
  std::string context;
  std::string question;
  std::string rendered;
  std::size_t word_count = 0;
};

inline constexpr std::string_view kNoContextPlaceholder =
    "(no relevant statements found)";

/// Renders the section template with the given context text. Throws
/// TemplateError on an unknown or unterminated placeholder.
Prompt render_prompt(std::string_view app_name, std::string_view context,
                     const Section& section, const Attribute& attribute);

/// Context is the segment texts joined by blank lines; an empty list renders
/// kNoContextPlaceholder.
Prompt build_prompt(std::string_view app_name, const std::vector<Segment>& segments,
                    const Section& section, const Attribute& attribute);

struct ContextChunk {
  std::string text;
  std::size_t word_count = 0;
  /// Segments with at least one word in this chunk, in order.
  std::vector<std::size_t> segment_ids;
};

/// Packs whole segments into chunks of at most `word_limit` words. Oversize
/// segments are split at sentence boundaries, oversize sentences at word
/// boundaries. Throws std::invalid_argument when word_limit is 0.
std::vector<ContextChunk> chunk_context(const std::vector<Segment>& segments,
                                        std::size_t word_limit);

/// Present iff the first word, ignoring leading whitespace and punctuation,
/// is "yes" in any case.
Presence parse_answer(std::string_view answer);

/// True when the text names a specific user group ("child", "under 13",
/// "California", "EEA", "European").
bool mentions_user_group(std::string_view text);

struct CostStats {
  std::size_t prompts_sent = 0;
  std::size_t prompt_words = 0;
  std::size_t answer_words = 0;
  /// Retrieval answer lines that matched no source sentence.
  std::size_t unmatched_lines = 0;

  CostStats& operator+=(const CostStats& other);
};

struct GenerationResult {
  PrivacyLabel label;
  CostStats cost;
};

/// Asks one yes/no question per (attribute, context chunk) over the segments
/// mapped to each section and OR-combines the answers. Sections with no
/// mapped segments are Absent without a model call. Throws
/// AttributeLlmError once retries are exhausted.
GenerationResult generate_label(const std::vector<Segment>& segments,
                                std::string_view app_name, const LabelSchema& schema,
                                const GenerationConfig& config, LlmClient& llm);

inline constexpr std::string_view kRetrievalInstruction =
    "Copy verbatim the sentences relevant to answering this question, or reply "
    "NONE.";

/// Asks `llm` to copy the sentences relevant to `question` out of every chunk
/// of the document and maps the reply lines back onto source sentences.
/// Each returned segment holds one sentence and its id is the sentence index.
std::vector<Segment> retrieve_relevant(const std::vector<Sentence>& sentences,
                                       std::string_view question,
                                       const GenerationConfig& config, LlmClient& llm,
                                       CostStats* cost = nullptr);

/// Retrieval-then-answer variant: for every attribute `retriever` first
/// selects sentences from the whole document, then `answerer` is asked the
/// question over them.
GenerationResult generate_label_full_llm(const std::vector<Sentence>& sentences,
                                         std::string_view app_name,
                                         const LabelSchema& schema,
                                         const GenerationConfig& config,
                                         LlmClient& retriever, LlmClient& answerer);

}  // namespace policy2label
