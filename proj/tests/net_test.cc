// Copyright 2026 The policy2label Authors
// SPDX-License-Identifier: Apache-2.0

#include <atomic>
#include <thread>

#include <gtest/gtest.h>
#include <httplib.h>
#include <json.hpp>

#include "policy2label/document.hpp"
#include "policy2label/errors.hpp"
#include "policy2label/llm.hpp"

using namespace policy2label;

namespace {

class LocalServer {
 public:
  LocalServer() {
    server.Get("/policy.html", [](const httplib::Request&, httplib::Response& res) {
      res.set_content("<p>hi</p>", "text/html; charset=utf-8");
    });
    server.Get("/policy.txt", [](const httplib::Request&, httplib::Response& res) {
      res.set_content("plain words", "text/plain");
    });
    server.Get("/missing", [](const httplib::Request&, httplib::Response& res) {
      res.status = 404;
    });
    server.Post("/v1/completions", [this](const httplib::Request& req, httplib::Response& res) {
      last_body = req.body;
      last_auth = req.get_header_value("Authorization");
      int n = ++completions;
      if (n <= fail_first) {
        res.status = fail_status;
        return;
      }
      res.set_content(R"({"choices":[{"text":" Yes."}]})", "application/json");
    });
    port = server.bind_to_any_port("127.0.0.1");
    thread = std::thread([this] { server.listen_after_bind(); });
    server.wait_until_ready();
  }
  ~LocalServer() {
    server.stop();
    thread.join();
  }
  std::string url(const std::string& path) const {
    return "http://127.0.0.1:" + std::to_string(port) + path;
  }

  httplib::Server server;
  std::thread thread;
  int port = 0;
  std::atomic<int> completions{0};
  int fail_first = 0;
  int fail_status = 503;
  std::string last_body;
  std::string last_auth;
};

}  // namespace

TEST(FetchPolicy, HtmlAndPlainText) {
  LocalServer s;
  auto html = fetch_policy(s.url("/policy.html"));
  EXPECT_EQ(html.content, "<p>hi</p>");
  EXPECT_EQ(html.media_kind, MediaKind::Html);
  EXPECT_EQ(html.fetched_from, s.url("/policy.html"));
  auto text = fetch_policy(s.url("/policy.txt"));
  EXPECT_EQ(text.media_kind, MediaKind::PlainText);
}

TEST(FetchPolicy, Errors) {
  LocalServer s;
  try {
    fetch_policy(s.url("/missing"));
    FAIL();
  } catch (const HttpError& e) {
    EXPECT_EQ(e.status(), 404);
  }
  // Nothing listens on port 1.
  EXPECT_THROW(fetch_policy("http://127.0.0.1:1/x", std::chrono::seconds(2)), NetworkError);
  EXPECT_THROW(fetch_policy("ftp://example.com/x"), NetworkError);
}

TEST(HttpCompletion, SendsRequestAndReadsText) {
  LocalServer s;
  HttpCompletionClient client({s.url("/v1/completions"), "m1", "secret", std::chrono::seconds(5)});
  EXPECT_EQ(client.complete("Is it?", 16), " Yes.");
  auto body = nlohmann::json::parse(s.last_body);
  EXPECT_EQ(body["model"], "m1");
  EXPECT_EQ(body["prompt"], "Is it?");
  EXPECT_EQ(body["temperature"], 0);
  EXPECT_TRUE(body.contains("max_tokens"));
  EXPECT_EQ(s.last_auth, "Bearer secret");
}

TEST(HttpCompletion, ServerErrorsAreRetryable) {
  LocalServer s;
  s.fail_first = 1;
  HttpCompletionClient client({s.url("/v1/completions"), "m", "", std::chrono::seconds(5)});
  try {
    client.complete("q", 8);
    FAIL();
  } catch (const LlmError& e) {
    EXPECT_TRUE(e.retryable());
  }
  EXPECT_EQ(client.complete("q", 8), " Yes.");
}

TEST(HttpCompletion, ClientErrorsAreTerminal) {
  LocalServer s;
  s.fail_first = 1;
  s.fail_status = 400;
  HttpCompletionClient client({s.url("/v1/completions"), "m", "", std::chrono::seconds(5)});
  try {
    client.complete("q", 8);
    FAIL();
  } catch (const LlmError& e) {
    EXPECT_FALSE(e.retryable());
  }
}

TEST(HttpCompletion, UnreachableIsRetryable) {
  HttpCompletionClient client({"http://127.0.0.1:1/v1/completions", "m", "", std::chrono::seconds(2)});
  try {
    client.complete("q", 8);
    FAIL();
  } catch (const LlmError& e) {
    EXPECT_TRUE(e.retryable());
  }
}
