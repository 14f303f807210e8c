// Copyright 2026 The policy2label Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace policy2label {

/// A text-completion backend. complete() either returns the answer text or
/// throws LlmError; implementations must tolerate concurrent calls.
class LlmClient {
 public:
  virtual ~LlmClient() = default;
  virtual std::string complete(std::string_view prompt, int max_answer_words) = 0;
};

inline constexpr const char* kApiKeyEnv = "POLICY2LABEL_API_KEY";

struct HttpCompletionOptions {
  /// Full URL of the completion endpoint, e.g. http://host:8080/v1/completions
  std::string endpoint;
  std::string model;
  /// Sent as a Bearer token when non-empty. See api_key_from_env().
  std::string api_key;
  std::chrono::seconds timeout{60};
};

std::string api_key_from_env();

/// POST {"model", "prompt", "max_tokens", "temperature": 0} and read
/// choices[0].text. Transport failures and 5xx are retryable LlmErrors,
/// every other non-2xx is terminal.
class HttpCompletionClient final : public LlmClient {
 public:
  explicit HttpCompletionClient(HttpCompletionOptions options);
  std::string complete(std::string_view prompt, int max_answer_words) override;

 private:
  HttpCompletionOptions options_;
  std::string scheme_host_port_;
  std::string path_;
};

/// Deterministic stand-in for a real model.
///
/// The prompt is split at its last line starting with "Question:". For
/// yes/no prompts the client answers with the first rule whose phrase occurs
/// (case-insensitive, at a word start) in both the question and the text
/// before it, else "No". For retrieval prompts (those asking to copy relevant
/// sentences) it echoes, one per line, every context sentence that contains
/// a phrase also found in the question, or "NONE".
class KeywordMockClient final : public LlmClient {
 public:
  struct Rule {
    std::string phrase;
    std::string answer = "Yes";
  };

  explicit KeywordMockClient(std::vector<Rule> rules);
  /// Rules compiled from data/mock_rules.json.
  static KeywordMockClient builtin();
  /// {"rules": [{"phrase": str, "answer": str (optional)}, ...]}
  static KeywordMockClient from_json(std::string_view json);

  std::string complete(std::string_view prompt, int max_answer_words) override;

 private:
  std::vector<Rule> rules_;
};

/// Hex SHA-256 of the prompt bytes.
std::string sha256_hex(std::string_view data);

/// Answers recorded earlier, keyed by prompt hash. Fixture format:
/// [{"prompt_sha256": hex, "answer": str}, ...]. Unknown prompts raise
/// ReplayMiss.
class ReplayClient final : public LlmClient {
 public:
  explicit ReplayClient(std::unordered_map<std::string, std::string> answers);
  static ReplayClient from_json(std::string_view json);
  static ReplayClient load(const std::filesystem::path& path);

  std::string complete(std::string_view prompt, int max_answer_words) override;

 private:
  std::unordered_map<std::string, std::string> answers_;
};

}  // namespace policy2label
