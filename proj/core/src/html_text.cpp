// Copyright 2026 The policy2label Authors
// SPDX-License-Identifier: Apache-2.0

// HTML to paragraph blocks. This is a tolerant tag scanner rather than a
// conforming HTML5 parser; policies in the wild are rarely well formed.

#include <algorithm>
#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include "policy2label/document.hpp"
#include "policy2label/errors.hpp"

namespace policy2label {
namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

bool iequals_prefix(std::string_view text, std::size_t pos, std::string_view prefix) {
  if (text.size() - pos < prefix.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    char a = text[pos + i];
    if (a >= 'A' && a <= 'Z') a = static_cast<char>(a - 'A' + 'a');
    if (a != prefix[i]) return false;
  }
  return true;
}

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp == 0 || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) cp = 0xFFFD;
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

struct NamedEntity {
  std::string_view name;
  std::uint32_t code_point;
};

constexpr std::array<NamedEntity, 32> kEntities{{
    {"amp", '&'},       {"lt", '<'},         {"gt", '>'},        {"quot", '"'},
    {"apos", '\''},     {"nbsp", 0xA0},      {"copy", 0xA9},     {"reg", 0xAE},
    {"trade", 0x2122},  {"mdash", 0x2014},   {"ndash", 0x2013},  {"hellip", 0x2026},
    {"lsquo", 0x2018},  {"rsquo", 0x2019},   {"ldquo", 0x201C},  {"rdquo", 0x201D},
    {"laquo", 0xAB},    {"raquo", 0xBB},     {"middot", 0xB7},   {"bull", 0x2022},
    {"euro", 0x20AC},   {"pound", 0xA3},     {"sect", 0xA7},     {"para", 0xB6},
    {"eacute", 0xE9},   {"egrave", 0xE8},    {"agrave", 0xE0},   {"ccedil", 0xE7},
    {"uuml", 0xFC},     {"ouml", 0xF6},      {"auml", 0xE4},     {"szlig", 0xDF},
}};

// Decodes the entity starting at text[pos] == '&'. On success appends the
// character and returns the index past the entity; otherwise returns pos.
// Numeric references may omit the semicolon, named ones may not.
std::size_t decode_entity(std::string_view text, std::size_t pos, std::string& out) {
  if (pos + 1 < text.size() && text[pos + 1] == '#') {
    std::size_t i = pos + 2;
    bool hex = i < text.size() && (text[i] == 'x' || text[i] == 'X');
    if (hex) ++i;
    std::size_t first_digit = i;
    std::uint32_t cp = 0;
    for (; i < text.size(); ++i) {
      char c = text[i];
      int d;
      if (c >= '0' && c <= '9') {
        d = c - '0';
      } else if (hex && c >= 'a' && c <= 'f') {
        d = c - 'a' + 10;
      } else if (hex && c >= 'A' && c <= 'F') {
        d = c - 'A' + 10;
      } else {
        break;
      }
      cp = cp * (hex ? 16 : 10) + static_cast<std::uint32_t>(d);
      if (cp > 0x10FFFF) cp = 0x110000;  // decoded as U+FFFD
    }
    if (i == first_digit) return pos;
    append_utf8(out, cp);
    return i < text.size() && text[i] == ';' ? i + 1 : i;
  }
  std::size_t semi = text.find(';', pos + 1);
  if (semi == std::string_view::npos || semi - pos > 12) return pos;
  std::string_view body = text.substr(pos + 1, semi - pos - 1);
  for (const auto& entity : kEntities) {
    if (entity.name == body) {
      append_utf8(out, entity.code_point);
      return semi + 1;
    }
  }
  return pos;
}

// Collapses ASCII whitespace and no-break spaces into single spaces.
std::string normalize_space(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    bool space = is_space(c);
    if (!space && c == '\xC2' && i + 1 < text.size() && text[i + 1] == '\xA0') {
      space = true;
      ++i;
    }
    if (space) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out += ' ';
    pending_space = false;
    out += c;
  }
  return out;
}

constexpr std::array<std::string_view, 2> kRawTextElements{"script", "style"};
constexpr std::array<std::string_view, 7> kSkippedElements{
    "head", "nav", "header", "footer", "noscript", "template", "title"};
constexpr std::array<std::string_view, 38> kBlockElements{
    "address", "article", "aside",  "blockquote", "body",    "br",      "caption", "dd",
    "details", "dialog",  "div",    "dl",         "dt",      "fieldset", "figcaption",
    "figure",  "form",    "h1",     "h2",         "h3",      "h4",      "h5",      "h6",
    "hr",      "html",    "li",     "main",       "ol",      "p",       "pre",     "section",
    "summary", "table",   "tbody",  "td",         "th",      "tr",      "ul"};

template <std::size_t N>
bool one_of(const std::array<std::string_view, N>& names, std::string_view name) {
  return std::find(names.begin(), names.end(), name) != names.end();
}

struct Tag {
  std::string name;
  bool closing = false;
  std::size_t end = 0;  // index past '>'
};

// Parses a tag at text[pos] == '<'. Returns false if this is not a tag.
bool parse_tag(std::string_view text, std::size_t pos, Tag& tag) {
  std::size_t i = pos + 1;
  tag.closing = false;
  if (i < text.size() && text[i] == '/') {
    tag.closing = true;
    ++i;
  }
  if (i >= text.size() || !is_alpha(text[i])) return false;
  std::size_t name_start = i;
  while (i < text.size() && !is_space(text[i]) && text[i] != '>' && text[i] != '/') ++i;
  tag.name = lower(text.substr(name_start, i - name_start));
  char quote = 0;
  while (i < text.size()) {
    char c = text[i];
    if (quote) {
      if (c == quote) quote = 0;
    } else if (c == '"' || c == '\'') {
      quote = c;
    } else if (c == '>') {
      break;
    }
    ++i;
  }
  tag.end = i < text.size() ? i + 1 : text.size();
  return true;
}

class BlockCollector {
 public:
  void text(std::string_view s) { current_ += s; }
  void text(char c) { current_ += c; }
  void flush() {
    auto block = normalize_space(current_);
    if (!block.empty()) blocks_.push_back(std::move(block));
    current_.clear();
  }
  std::vector<std::string> take() {
    flush();
    return std::move(blocks_);
  }

 private:
  std::string current_;
  std::vector<std::string> blocks_;
};

std::vector<std::string> html_blocks(std::string_view html) {
  BlockCollector out;
  std::string skipping;  // name of the element whose content is dropped
  std::size_t skip_depth = 0;
  std::size_t i = 0;
  while (i < html.size()) {
    char c = html[i];
    if (c == '<') {
      if (html.compare(i, 4, "<!--") == 0) {
        std::size_t end = html.find("-->", i + 4);
        i = end == std::string_view::npos ? html.size() : end + 3;
        continue;
      }
      if (i + 1 < html.size() && (html[i + 1] == '!' || html[i + 1] == '?')) {
        std::size_t end = html.find('>', i + 2);
        i = end == std::string_view::npos ? html.size() : end + 1;
        continue;
      }
      Tag tag;
      if (parse_tag(html, i, tag)) {
        i = tag.end;
        if (!tag.closing && one_of(kRawTextElements, tag.name)) {
          std::string close = "</" + tag.name;
          std::size_t j = i;
          while (j < html.size() && !iequals_prefix(html, j, close)) ++j;
          std::size_t end = html.find('>', j);
          i = end == std::string_view::npos ? html.size() : end + 1;
          continue;
        }
        if (!skipping.empty()) {
          if (tag.name == skipping) {
            if (tag.closing) {
              if (--skip_depth == 0) skipping.clear();
            } else {
              ++skip_depth;
            }
          } else if (skipping == "head" && tag.name == "body" && !tag.closing) {
            // An unclosed <head> ends where <body> starts.
            skipping.clear();
            skip_depth = 0;
          }
          continue;
        }
        if (!tag.closing && one_of(kSkippedElements, tag.name)) {
          out.flush();
          skipping = tag.name;
          skip_depth = 1;
          continue;
        }
        if (one_of(kBlockElements, tag.name)) out.flush();
        continue;
      }
    }
    if (!skipping.empty()) {
      ++i;
      continue;
    }
    if (c == '&') {
      std::string decoded;
      std::size_t next = decode_entity(html, i, decoded);
      if (next != i) {
        out.text(decoded);
        i = next;
        continue;
      }
    }
    out.text(c);
    ++i;
  }
  return out.take();
}

std::vector<std::string> plain_blocks(std::string_view text) {
  std::vector<std::string> blocks;
  std::string paragraph;
  auto flush = [&] {
    auto block = normalize_space(paragraph);
    if (!block.empty()) blocks.push_back(std::move(block));
    paragraph.clear();
  };
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (std::all_of(line.begin(), line.end(), is_space)) {
      flush();
    } else {
      paragraph += line;
      paragraph += ' ';
    }
    start = end + 1;
  }
  flush();
  return blocks;
}

}  // namespace

CleanText clean_html(const RawDocument& doc) {
  auto blocks = doc.media_kind == MediaKind::Html ? html_blocks(doc.content)
                                                  : plain_blocks(doc.content);
  if (blocks.empty()) throw EmptyDocument(doc.source_id + ": no text after cleaning");
  return make_clean_text(doc.source_id, std::move(blocks));
}

}  // namespace policy2label
