// Copyright 2026 The policy2label Authors
// SPDX-License-Identifier: Apache-2.0

#include <fstream>
#include <sstream>

#include "embedded_data.hpp"
#include "policy2label/document.hpp"
#include "policy2label/errors.hpp"

namespace policy2label {
namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

bool is_terminal(char c) { return c == '.' || c == '!' || c == '?'; }

// Length of a closing quote or bracket at text[i], 0 if none.
std::size_t closer_length(std::string_view text, std::size_t i) {
  char c = text[i];
  if (c == '"' || c == '\'' || c == ')' || c == ']') return 1;
  // U+2019 and U+201D
  if (text.compare(i, 3, "\xE2\x80\x99") == 0 || text.compare(i, 3, "\xE2\x80\x9D") == 0) {
    return 3;
  }
  return 0;
}

bool starts_sentence(char c) { return (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9'); }

// The whitespace-delimited word ending at text[end - 1], minus leading
// brackets and quotes.
std::string_view word_ending_at(std::string_view text, std::size_t end) {
  std::size_t start = end;
  while (start > 0 && !is_space(text[start - 1])) --start;
  auto word = text.substr(start, end - start);
  while (!word.empty() && (word.front() == '(' || word.front() == '"' ||
                           word.front() == '\'' || word.front() == '[')) {
    word.remove_prefix(1);
  }
  return word;
}

}  // namespace

AbbreviationTable AbbreviationTable::parse(std::string_view contents) {
  AbbreviationTable table;
  std::istringstream in{std::string(contents)};
  std::string line;
  while (std::getline(in, line)) {
    auto entry = trim(line);
    if (entry.empty() || entry.front() == '#') continue;
    table.add(entry);
  }
  return table;
}

AbbreviationTable AbbreviationTable::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open abbreviation list " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str());
}

const AbbreviationTable& AbbreviationTable::builtin() {
  static const AbbreviationTable table = parse(data::kAbbreviations);
  return table;
}

void AbbreviationTable::add(std::string_view abbreviation) {
  entries_.insert(lower(abbreviation));
}

bool AbbreviationTable::contains(std::string_view word) const {
  return entries_.count(lower(word)) > 0;
}

std::vector<Sentence> split_block(std::string_view block,
                                  const AbbreviationTable& abbreviations,
                                  std::size_t first_index) {
  std::vector<Sentence> sentences;
  auto emit = [&](std::string_view text) {
    text = trim(text);
    if (!text.empty()) sentences.push_back({first_index + sentences.size(), std::string(text)});
  };

  std::size_t start = 0;
  for (std::size_t i = 0; i < block.size(); ++i) {
    if (!is_terminal(block[i])) continue;
    std::size_t end = i + 1;
    while (end < block.size()) {
      std::size_t n = closer_length(block, end);
      if (n == 0) break;
      end += n;
    }
    if (end >= block.size() || !is_space(block[end])) continue;
    std::size_t next = end;
    while (next < block.size() && is_space(block[next])) ++next;
    if (next >= block.size() || !starts_sentence(block[next])) continue;
    if (block[i] == '.' && abbreviations.contains(word_ending_at(block, i + 1))) continue;
    emit(block.substr(start, end - start));
    start = next;
    i = next - 1;
  }
  emit(block.substr(start));
  return sentences;
}

std::vector<Sentence> split_sentences(const CleanText& text,
                                      const AbbreviationTable& abbreviations) {
  std::vector<Sentence> sentences;
  for (const auto& block : text.blocks) {
    auto part = split_block(block, abbreviations, sentences.size());
    sentences.insert(sentences.end(), std::make_move_iterator(part.begin()),
                     std::make_move_iterator(part.end()));
  }
  return sentences;
}

}  // namespace policy2label
