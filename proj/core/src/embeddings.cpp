// Copyright 2026 The policy2label Authors
// SPDX-License-Identifier: Apache-2.0

#include "policy2label/embeddings.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "policy2label/errors.hpp"

namespace policy2label {
namespace {

bool is_word_byte(unsigned char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         c >= 0x80;
}

char ascii_lower(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

std::string lowercase(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), ascii_lower);
  return out;
}

std::vector<std::string_view> split_spaces(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) fields.push_back(line.substr(start, i - start));
  }
  return fields;
}

template <typename T>
bool parse_number(std::string_view field, T& value) {
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  return ec == std::errc() && ptr == field.data() + field.size();
}

}  // namespace

Vector::Vector(std::vector<double> components) : components_(std::move(components)) {
  for (double v : components_) {
    if (!std::isfinite(v)) throw std::invalid_argument("vector component is not finite");
  }
}

double Vector::norm() const noexcept {
  double sum = 0.0;
  for (double v : components_) sum += v * v;
  return std::sqrt(sum);
}

bool Vector::is_zero() const noexcept {
  return std::all_of(components_.begin(), components_.end(),
                     [](double v) { return v == 0.0; });
}

double cosine_similarity(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) {
    throw DimensionMismatch("cosine of vectors with dimensions " + std::to_string(a.size()) +
                            " and " + std::to_string(b.size()));
  }
  double dot = 0.0;
  double aa = 0.0;
  double bb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    aa += a[i] * a[i];
    bb += b[i] * b[i];
  }
  if (aa == 0.0 || bb == 0.0) return 0.0;
  // sqrt(aa * bb) is exact for a == b, so self-similarity comes out as 1.0.
  double product = aa * bb;
  double denom = std::isfinite(product) && product > 0.0 ? std::sqrt(product)
                                                         : std::sqrt(aa) * std::sqrt(bb);
  return std::clamp(dot / denom, -1.0, 1.0);
}

std::vector<std::string> tokenize_words(std::string_view text) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && !is_word_byte(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t start = i;
    while (i < text.size() && is_word_byte(static_cast<unsigned char>(text[i]))) ++i;
    if (i > start) tokens.push_back(lowercase(text.substr(start, i - start)));
  }
  return tokens;
}

WordVectorStore::WordVectorStore(std::size_t dimension) : dimension_(dimension) {
  if (dimension == 0) throw std::invalid_argument("word vectors need a positive dimension");
}

WordVectorStore WordVectorStore::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open word vectors " + path.string());
  return parse(in);
}

WordVectorStore WordVectorStore::parse(std::istream& in) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) throw FormatError(1, "missing header");
  auto header = split_spaces(line);
  std::size_t count = 0;
  std::size_t dim = 0;
  if (header.size() != 2 || !parse_number(header[0], count) ||
      !parse_number(header[1], dim) || dim == 0) {
    throw FormatError(1, "header must be \"<count> <dim>\"");
  }

  WordVectorStore store(dim);
  std::size_t rows = 0;
  std::vector<double> values;
  while (std::getline(in, line)) {
    ++line_no;
    auto fields = split_spaces(line);
    if (fields.empty()) continue;
    if (fields.size() != dim + 1) {
      throw FormatError(line_no, "expected " + std::to_string(dim) + " values, found " +
                                     std::to_string(fields.size() - 1));
    }
    values.assign(dim, 0.0);
    for (std::size_t k = 0; k < dim; ++k) {
      if (!parse_number(fields[k + 1], values[k]) || !std::isfinite(values[k])) {
        throw FormatError(line_no, "bad real \"" + std::string(fields[k + 1]) + "\"");
      }
    }
    store.add(fields[0], Vector(values));
    ++rows;
  }
  if (rows != count) {
    throw FormatError(line_no + 1, "header declares " + std::to_string(count) +
                                       " rows, file has " + std::to_string(rows));
  }
  return store;
}

bool WordVectorStore::add(std::string_view token, Vector vector) {
  if (vector.size() != dimension_) {
    throw DimensionMismatch("vector for \"" + std::string(token) + "\" has dimension " +
                            std::to_string(vector.size()));
  }
  return entries_.try_emplace(lowercase(token), std::move(vector)).second;
}

const Vector* WordVectorStore::find(std::string_view token) const {
  auto it = entries_.find(lowercase(token));
  return it == entries_.end() ? nullptr : &it->second;
}

Vector WordVectorStore::embed(std::string_view text) const {
  std::vector<double> sum(dimension_, 0.0);
  std::size_t known = 0;
  // Summing in sorted order makes the mean exactly independent of word order.
  auto tokens = tokenize_words(text);
  std::sort(tokens.begin(), tokens.end());
  for (const auto& token : tokens) {
    auto it = entries_.find(token);
    if (it == entries_.end()) continue;
    auto components = it->second.components();
    for (std::size_t k = 0; k < dimension_; ++k) sum[k] += components[k];
    ++known;
  }
  if (known > 0) {
    for (double& v : sum) v /= static_cast<double>(known);
  }
  return Vector(std::move(sum));
}

HashedBagOfWords::HashedBagOfWords(std::size_t dimension) : dimension_(dimension) {
  if (dimension == 0) throw std::invalid_argument("hash embedding needs a positive dimension");
}

Vector HashedBagOfWords::embed(std::string_view text) const {
  std::vector<double> counts(dimension_, 0.0);
  auto tokens = tokenize_words(text);
  for (const auto& token : tokens) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : token) {
      h ^= c;
      h *= 1099511628211ULL;
    }
    counts[h % dimension_] += 1.0;
  }
  if (!tokens.empty()) {
    for (double& v : counts) v /= static_cast<double>(tokens.size());
  }
  return Vector(std::move(counts));
}

}  // namespace policy2label
