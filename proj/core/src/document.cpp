// Copyright 2026 The policy2label Authors
// SPDX-License-Identifier: Apache-2.0

#include <fstream>
#include <sstream>

#include "policy2label/document.hpp"
#include "policy2label/errors.hpp"

namespace policy2label {

RawDocument read_document(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  RawDocument doc;
  doc.source_id = path.filename().string();
  doc.content = std::move(buffer).str();
  auto ext = path.extension().string();
  doc.media_kind = (ext == ".txt" || ext == ".text") ? MediaKind::PlainText : MediaKind::Html;
  if (doc.content.empty()) throw EmptyDocument(path.string() + " is empty");
  return doc;
}

std::size_t count_words(std::string_view text) {
  std::size_t words = 0;
  bool in_word = false;
  for (char c : text) {
    bool space = c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
    if (!space && !in_word) ++words;
    in_word = !space;
  }
  return words;
}

CleanText make_clean_text(std::string source_id, std::vector<std::string> blocks) {
  CleanText text;
  text.source_id = std::move(source_id);
  text.blocks = std::move(blocks);
  for (const auto& block : text.blocks) {
    text.word_count += count_words(block);
    text.byte_size += block.size() + 1;
  }
  return text;
}

QualityVerdict quality_check(const CleanText& text) {
  if (text.word_count < kMinPolicyWords) return Reject{RejectReason::TooShort};
  if (text.byte_size < kMinPolicyBytes) return Reject{RejectReason::TooSmall};
  return Accept{};
}

std::string_view to_string(RejectReason reason) {
  switch (reason) {
    case RejectReason::TooShort:
      return "TooShort";
    case RejectReason::TooSmall:
      return "TooSmall";
  }
  return "Unknown";
}

}  // namespace policy2label
