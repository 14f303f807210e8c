// Copyright 2026 The policy2label Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace policy2label {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class NetworkError : public Error {
 public:
  using Error::Error;
};

class HttpError : public Error {
 public:
  explicit HttpError(int status)
      : Error("HTTP status " + std::to_string(status)), status_(status) {}
  int status() const noexcept { return status_; }

 private:
  int status_;
};

class EmptyDocument : public Error {
 public:
  using Error::Error;
};

class NonPrimaryLanguageDocument : public Error {
 public:
  using Error::Error;
};

/// A document failed a quality gate (too short, too small, not in the
/// primary language, or empty after cleaning).
class QualityRejected : public Error {
 public:
  using Error::Error;
};

/// Bad run configuration: missing files, out-of-range thresholds.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class EmbeddingUnavailable : public Error {
 public:
  using Error::Error;
};

/// Word-vector file violation; line() is 1-based.
class FormatError : public Error {
 public:
  FormatError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class InsufficientData : public Error {
 public:
  using Error::Error;
};

class MissingEmbedding : public Error {
 public:
  using Error::Error;
};

class SchemaInvalid : public Error {
 public:
  using Error::Error;
};

class SchemaMismatch : public Error {
 public:
  using Error::Error;
};

class TemplateError : public Error {
 public:
  using Error::Error;
};

class EmptySection : public Error {
 public:
  using Error::Error;
};

/// Failure talking to a language model. `retryable()` distinguishes
/// transport/5xx failures from terminal ones (4xx, replay misses).
class LlmError : public Error {
 public:
  LlmError(const std::string& what, bool retryable)
      : Error(what), retryable_(retryable) {}
  bool retryable() const noexcept { return retryable_; }

 private:
  bool retryable_;
};

class ReplayMiss : public LlmError {
 public:
  explicit ReplayMiss(const std::string& hash)
      : LlmError("no replay entry for prompt sha256 " + hash, false),
        hash_(hash) {}
  const std::string& hash() const noexcept { return hash_; }

 private:
  std::string hash_;
};

/// Raised by label generation once retries are exhausted for one attribute.
/// Carries how far the run got before aborting.
class AttributeLlmError : public LlmError {
 public:
  AttributeLlmError(std::string section, std::string attribute,
                   std::size_t completed_pairs, std::size_t total_pairs,
                   const std::string& cause)
      : LlmError("LLM failure on " + section + "/" + attribute + " after " +
              std::to_string(completed_pairs) + " of " +
              std::to_string(total_pairs) + " attributes: " + cause,
                 false),
        section_(std::move(section)),
        attribute_(std::move(attribute)),
        completed_pairs_(completed_pairs),
        total_pairs_(total_pairs) {}

  const std::string& section() const noexcept { return section_; }
  const std::string& attribute() const noexcept { return attribute_; }
  std::size_t completed_pairs() const noexcept { return completed_pairs_; }
  std::size_t total_pairs() const noexcept { return total_pairs_; }

 private:
  std::string section_;
  std::string attribute_;
  std::size_t completed_pairs_;
  std::size_t total_pairs_;
};

}  // namespace policy2label
