// Copyright 2026 The policy2label Authors
// SPDX-License-Identifier: Apache-2.0

#include "policy2label/llm.hpp"

#include <openssl/evp.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <httplib.h>
#include <json.hpp>

#include "embedded_data.hpp"
#include "http_util.hpp"
#include "policy2label/document.hpp"
#include "policy2label/errors.hpp"
#include "text_match.hpp"

namespace policy2label {
namespace {

using nlohmann::json;

constexpr std::string_view kQuestionMarker = "Question:";

// Splits a prompt into (everything before, question) at the last line that
// starts with "Question:". The question keeps its text up to the end.
std::pair<std::string_view, std::string_view> split_question(std::string_view prompt) {
  std::size_t pos = std::string_view::npos;
  for (std::size_t p = prompt.find(kQuestionMarker); p != std::string_view::npos;
       p = prompt.find(kQuestionMarker, p + 1)) {
    if (p == 0 || prompt[p - 1] == '\n') pos = p;
  }
  if (pos == std::string_view::npos) return {prompt, {}};
  return {prompt.substr(0, pos), prompt.substr(pos)};
}

}  // namespace

std::string api_key_from_env() {
  const char* key = std::getenv(kApiKeyEnv);
  return key ? std::string(key) : std::string();
}

// HTTP backend.

HttpCompletionClient::HttpCompletionClient(HttpCompletionOptions options)
    : options_(std::move(options)) {
  auto parts = detail::split_url(options_.endpoint);
  if (!parts) throw ConfigError("LLM endpoint is not an http(s) URL: " + options_.endpoint);
  scheme_host_port_ = parts->scheme_host_port;
  path_ = parts->path;
}

std::string HttpCompletionClient::complete(std::string_view prompt, int max_answer_words) {
  httplib::Client client(scheme_host_port_);
  if (!client.is_valid()) throw LlmError("cannot use endpoint " + options_.endpoint, false);
  client.set_connection_timeout(options_.timeout);
  client.set_read_timeout(options_.timeout);
  httplib::Headers headers;
  if (!options_.api_key.empty()) {
    headers.emplace("Authorization", "Bearer " + options_.api_key);
  }

  json request = {{"model", options_.model},
                  {"prompt", std::string(prompt)},
                  // Roughly four tokens per three English words.
                  {"max_tokens", (max_answer_words * 4 + 2) / 3},
                  {"temperature", 0}};
  auto response = client.Post(path_, headers,
                              request.dump(-1, ' ', false, json::error_handler_t::replace),
                              "application/json");
  if (!response) {
    throw LlmError("POST " + options_.endpoint + ": " + httplib::to_string(response.error()),
                   true);
  }
  if (response->status >= 500) {
    throw LlmError("completion endpoint returned " + std::to_string(response->status), true);
  }
  if (response->status < 200 || response->status >= 300) {
    throw LlmError("completion endpoint returned " + std::to_string(response->status), false);
  }
  try {
    auto body = json::parse(response->body);
    return body.at("choices").at(0).at("text").get<std::string>();
  } catch (const json::exception& e) {
    throw LlmError(std::string("malformed completion response: ") + e.what(), false);
  }
}

// Keyword mock.

KeywordMockClient::KeywordMockClient(std::vector<Rule> rules) : rules_(std::move(rules)) {
  for (auto& rule : rules_) rule.phrase = detail::ascii_lower(rule.phrase);
}

KeywordMockClient KeywordMockClient::builtin() { return from_json(data::kMockRules); }

KeywordMockClient KeywordMockClient::from_json(std::string_view text) {
  try {
    auto doc = json::parse(text);
    std::vector<Rule> rules;
    for (const auto& entry : doc.at("rules")) {
      rules.push_back({entry.at("phrase").get<std::string>(),
                       entry.value("answer", std::string("Yes"))});
    }
    return KeywordMockClient(std::move(rules));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid mock rules: ") + e.what());
  }
}

std::string KeywordMockClient::complete(std::string_view prompt, int /*max_answer_words*/) {
  auto [context, question] = split_question(prompt);
  auto lowered_question = detail::ascii_lower(question);

  std::vector<const Rule*> asked;
  for (const auto& rule : rules_) {
    if (detail::contains_at_word_start(lowered_question, rule.phrase)) asked.push_back(&rule);
  }

  if (prompt.find("Copy verbatim") != std::string_view::npos) {
    // Retrieval: the chunk sits between the first line and the question.
    auto first_newline = context.find('\n');
    auto chunk = first_newline == std::string_view::npos ? std::string_view()
                                                         : context.substr(first_newline + 1);
    std::string reply;
    std::istringstream lines{std::string(chunk)};
    std::vector<Sentence> sentences;
    for (std::string line; std::getline(lines, line);) {
      auto part = split_block(line, AbbreviationTable::builtin());
      sentences.insert(sentences.end(), part.begin(), part.end());
    }
    for (const auto& sentence : sentences) {
      auto lowered = detail::ascii_lower(sentence.text);
      for (const Rule* rule : asked) {
        if (detail::contains_at_word_start(lowered, rule->phrase)) {
          reply += sentence.text;
          reply += '\n';
          break;
        }
      }
    }
    return reply.empty() ? "NONE" : reply;
  }

  auto lowered_context = detail::ascii_lower(context);
  for (const Rule* rule : asked) {
    if (detail::contains_at_word_start(lowered_context, rule->phrase)) return rule->answer;
  }
  return "No";
}

// Replay.

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 computation failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(length * 2);
  for (unsigned int i = 0; i < length; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xF];
  }
  return out;
}

ReplayClient::ReplayClient(std::unordered_map<std::string, std::string> answers)
    : answers_(std::move(answers)) {}

ReplayClient ReplayClient::from_json(std::string_view text) {
  try {
    std::unordered_map<std::string, std::string> answers;
    for (const auto& entry : json::parse(text)) {
      answers[detail::ascii_lower(entry.at("prompt_sha256").get<std::string>())] =
          entry.at("answer").get<std::string>();
    }
    return ReplayClient(std::move(answers));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid replay fixture: ") + e.what());
  }
}

ReplayClient ReplayClient::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open replay fixture " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return from_json(buffer.str());
}

std::string ReplayClient::complete(std::string_view prompt, int /*max_answer_words*/) {
  auto hash = sha256_hex(prompt);
  auto it = answers_.find(hash);
  if (it == answers_.end()) throw ReplayMiss(hash);
  return it->second;
}

}  // namespace policy2label
