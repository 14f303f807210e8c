// Copyright 2026 The policy2label Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <variant>
#include <vector>

#include "policy2label/category.hpp"
#include "policy2label/embeddings.hpp"

namespace policy2label {

enum class MediaKind { Html, PlainText };

struct RawDocument {
  std::string source_id;
  std::string content;
  MediaKind media_kind = MediaKind::Html;
  std::optional<std::string> fetched_from;
};

/// Reads a policy file; `.txt` files are PlainText, everything else Html.
RawDocument read_document(const std::filesystem::path& path);

/// Downloads a policy over http(s). The media kind follows the Content-Type
/// header (text/plain -> PlainText, anything else Html).
RawDocument fetch_policy(const std::string& url,
                         std::chrono::seconds timeout = std::chrono::seconds(30));

/// Markup-free paragraph blocks plus the size figures used by quality gates.
struct CleanText {
  std::string source_id;
  std::vector<std::string> blocks;
  std::size_t word_count = 0;
  /// Bytes of the blocks written one per line, newline-terminated.
  std::size_t byte_size = 0;
};

CleanText make_clean_text(std::string source_id, std::vector<std::string> blocks);
std::size_t count_words(std::string_view text);

/// Drops script/style/head/nav/header/footer content, decodes entities and
/// emits one block per block-level element. PlainText input is split on blank
/// lines. Throws EmptyDocument when nothing is left.
CleanText clean_html(const RawDocument& doc);

// Language identification.

struct LanguageGuess {
  std::string language;  // empty when nothing was recognised
  double confidence = 0.0;
};

/// Stop-word vote over a fixed set of European languages.
LanguageGuess detect_language(std::string_view text);

struct LanguageFilterOptions {
  std::string primary = "en";
  double min_block_confidence = 0.5;
  /// Blocks shorter than this inherit the previous block's verdict.
  std::size_t min_block_words = 5;
};

/// Removes blocks written in a language other than `primary`.
/// Throws NonPrimaryLanguageDocument if no block survives.
CleanText filter_language(const CleanText& text,
                          const LanguageFilterOptions& options = {});

// Quality gates.

enum class RejectReason { TooShort, TooSmall };

struct Accept {};
struct Reject {
  RejectReason reason;
};
using QualityVerdict = std::variant<Accept, Reject>;

inline constexpr std::size_t kMinPolicyWords = 200;
inline constexpr std::size_t kMinPolicyBytes = 2048;

QualityVerdict quality_check(const CleanText& text);
std::string_view to_string(RejectReason reason);

// Sentences and segments.

struct Sentence {
  std::size_t index = 0;
  std::string text;
};

/// Abbreviations whose trailing period never ends a sentence.
class AbbreviationTable {
 public:
  AbbreviationTable() = default;
  /// One abbreviation per line; '#' starts a comment.
  static AbbreviationTable parse(std::string_view contents);
  static AbbreviationTable load(const std::filesystem::path& path);
  /// The table compiled into the library from data/abbreviations.txt.
  static const AbbreviationTable& builtin();

  void add(std::string_view abbreviation);
  /// Case-insensitive membership test; `word` includes its final period.
  bool contains(std::string_view word) const;
  std::size_t size() const noexcept { return entries_.size(); }

 private:
  std::unordered_set<std::string> entries_;
};

std::vector<Sentence> split_sentences(
    const CleanText& text,
    const AbbreviationTable& abbreviations = AbbreviationTable::builtin());

/// Splits one block of text; indices start at `first_index`.
std::vector<Sentence> split_block(std::string_view block,
                                  const AbbreviationTable& abbreviations,
                                  std::size_t first_index = 0);

struct Segment {
  std::size_t segment_id = 0;
  /// Half-open range [first_sentence, first_sentence + sentence_count).
  std::size_t first_sentence = 0;
  std::size_t sentence_count = 0;
  std::string text;
  std::optional<Vector> embedding;
  CategorySet categories;
};

inline constexpr std::size_t kMaxSentencesPerSegment = 4;

struct SegmenterConfig {
  double similarity_threshold = 0.85;
};

/// Greedy left-to-right merge: the running segment absorbs the next sentence
/// while cosine(segment, sentence) >= threshold and it holds fewer than four
/// sentences. Throws EmbeddingUnavailable if the embedder fails.
std::vector<Segment> segment(const std::vector<Sentence>& sentences,
                             const SentenceEmbedder& embedder,
                             const SegmenterConfig& config = {});

}  // namespace policy2label
