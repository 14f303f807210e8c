// Copyright 2026 The policy2label Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <filesystem>
#include <initializer_list>
#include <istream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace policy2label {

/// Dense real vector with finite components.
class Vector {
 public:
  Vector() = default;
  explicit Vector(std::size_t dimension) : components_(dimension, 0.0) {}
  /// Throws std::invalid_argument on NaN or infinite components.
  explicit Vector(std::vector<double> components);
  Vector(std::initializer_list<double> components)
      : Vector(std::vector<double>(components)) {}

  std::size_t size() const noexcept { return components_.size(); }
  double operator[](std::size_t i) const { return components_[i]; }
  std::span<const double> components() const noexcept { return components_; }
  double norm() const noexcept;
  bool is_zero() const noexcept;

  friend bool operator==(const Vector&, const Vector&) = default;

 private:
  std::vector<double> components_;
};

/// Cosine of the angle between `a` and `b`; 0.0 when either has zero norm.
/// Throws DimensionMismatch when sizes differ.
double cosine_similarity(const Vector& a, const Vector& b);

/// Lowercased tokens split on non-alphanumeric boundaries. Bytes >= 0x80 are
/// treated as word characters so UTF-8 words stay whole.
std::vector<std::string> tokenize_words(std::string_view text);

/// Something that can map a piece of text to a fixed-dimension vector.
/// Implementations must be safe for concurrent calls.
class SentenceEmbedder {
 public:
  virtual ~SentenceEmbedder() = default;
  virtual std::size_t dimension() const = 0;
  virtual Vector embed(std::string_view text) const = 0;
};

/// In-memory word-vector table in the common `.vec` text format.
class WordVectorStore final : public SentenceEmbedder {
 public:
  explicit WordVectorStore(std::size_t dimension);

  /// Parses "<count> <dim>" followed by `count` rows of "token v1 .. vdim".
  /// Tokens are lowercased; on a collision the first row wins.
  static WordVectorStore load(const std::filesystem::path& path);
  static WordVectorStore parse(std::istream& in);

  /// Returns false if the (lowercased) token was already present.
  bool add(std::string_view token, Vector vector);
  const Vector* find(std::string_view token) const;
  std::size_t size() const noexcept { return entries_.size(); }

  std::size_t dimension() const override { return dimension_; }
  /// Mean of in-vocabulary token vectors; the zero vector if none are known.
  Vector embed(std::string_view text) const override;

 private:
  std::size_t dimension_;
  std::unordered_map<std::string, Vector> entries_;
};

/// Fallback embedder used when no vector file is configured: each token is
/// hashed (FNV-1a) to a bucket and the normalized bucket counts are returned.
class HashedBagOfWords final : public SentenceEmbedder {
 public:
  explicit HashedBagOfWords(std::size_t dimension = 256);
  std::size_t dimension() const override { return dimension_; }
  Vector embed(std::string_view text) const override;

 private:
  std::size_t dimension_;
};

}  // namespace policy2label
