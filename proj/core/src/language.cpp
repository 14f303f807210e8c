// Copyright 2026 The policy2label Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <array>
#include <string_view>
#include <unordered_set>

#include "policy2label/document.hpp"
#include "policy2label/errors.hpp"

namespace policy2label {
namespace {

struct StopWords {
  std::string_view language;
  std::unordered_set<std::string_view> words;
};

const std::array<StopWords, 7>& stop_words() {
  static const std::array<StopWords, 7> table{{
      {"en",
       {"the",   "and",  "of",    "to",   "is",    "that",  "for",   "with", "this",
        "are",   "be",   "by",    "on",   "or",    "as",    "we",    "you",  "your",
        "our",   "it",   "not",   "will", "any",   "from",  "such",  "an",   "have",
        "can",   "which", "may",  "these", "when", "who",   "what",  "if",   "at",
        "us",    "they", "their", "was",  "were",  "has",   "been",  "would", "should",
        "about", "more", "other", "into", "also",  "only",  "how",   "use",  "information"}},
      {"fr",
       {"le",   "la",   "les",  "des",   "du",    "et",    "est",   "nous", "vous",
        "votre", "vos", "pour", "dans",  "une",   "un",    "que",   "qui",  "sur",
        "pas",  "par",  "avec", "ce",    "cette", "ces",   "sont",  "au",   "aux",
        "ou",   "\xC3\xA0", "\xC3\xAAtre", "donn\xC3\xA9" "es", "notre", "nos", "peut",
        "plus", "leur", "vos",  "lorsque"}},
      {"de",
       {"der",   "die",  "das",  "und",  "ist",  "nicht", "wir",  "sie",    "ihre",
        "ihr",   "zu",   "den",  "dem",  "des",  "mit",   "von",  "f\xC3\xBCr", "auf",
        "ein",   "eine", "einer", "werden", "wird", "auch", "oder", "sich",  "bei",
        "dass",  "uns",  "unsere", "diese", "nach", "daten", "k\xC3\xB6nnen", "im"}},
      {"es",
       {"el",   "los",  "las",  "del",  "y",    "es",    "que",   "para", "con",
        "por",  "una",  "su",   "sus",  "nuestro", "nuestra", "nosotros", "usted", "se",
        "lo",   "como", "m\xC3\xA1s", "pero", "datos", "esta", "este", "puede", "sobre",
        "al",   "le",   "sus"}},
      {"it",
       {"il",   "lo",   "gli",  "della", "delle", "dei",  "di",   "e",    "\xC3\xA8",
        "che",  "per",  "con",  "non",   "una",   "un",   "sono", "nostro", "nostra",
        "vostro", "i",  "ai",   "dal",   "nel",   "nella", "questo", "questa", "dati",
        "anche", "come", "pi\xC3\xB9", "essere"}},
      {"pt",
       {"o",    "os",   "as",   "da",   "das",   "do",   "dos",  "e",    "\xC3\xA9",
        "que",  "para", "com",  "n\xC3\xA3o", "uma", "um", "seu", "sua",  "seus",
        "n\xC3\xB3s", "voc\xC3\xAA", "em", "no", "na", "nos", "pelo", "pela", "dados",
        "este", "esta", "pode", "mais", "ao"}},
      {"nl",
       {"de",   "het",  "een",  "en",    "van",   "is",    "dat",  "wij",  "u",
        "uw",   "ons",  "onze", "niet",  "voor",  "met",   "op",   "te",   "zijn",
        "worden", "wordt", "deze", "die", "kan",  "ook",   "bij",  "naar", "gegevens",
        "om",   "als"}},
  }};
  return table;
}

}  // namespace

LanguageGuess detect_language(std::string_view text) {
  const auto& table = stop_words();
  std::array<std::size_t, 7> hits{};
  for (const auto& token : tokenize_words(text)) {
    for (std::size_t l = 0; l < table.size(); ++l) {
      if (table[l].words.count(token)) ++hits[l];
    }
  }
  std::size_t total = 0;
  std::size_t best = 0;
  for (std::size_t l = 0; l < hits.size(); ++l) {
    total += hits[l];
    if (hits[l] > hits[best]) best = l;
  }
  if (total == 0) return {};
  return {std::string(table[best].language),
          static_cast<double>(hits[best]) / static_cast<double>(total)};
}

CleanText filter_language(const CleanText& text, const LanguageFilterOptions& options) {
  std::vector<std::string> kept;
  bool keep_previous = true;
  for (const auto& block : text.blocks) {
    bool keep = keep_previous;
    if (count_words(block) >= options.min_block_words) {
      auto guess = detect_language(block);
      if (!guess.language.empty() && guess.confidence >= options.min_block_confidence) {
        keep = guess.language == options.primary;
      }
    }
    if (keep) kept.push_back(block);
    keep_previous = keep;
  }
  if (kept.empty()) {
    throw NonPrimaryLanguageDocument(text.source_id + ": no block in language \"" +
                                     options.primary + "\"");
  }
  return make_clean_text(text.source_id, std::move(kept));
}

}  // namespace policy2label
