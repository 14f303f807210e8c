// Copyright 2026 The policy2label Authors
// SPDX-License-Identifier: Apache-2.0

#include <sys/wait.h>

#include <cstdlib>

#include <gtest/gtest.h>
#include <json.hpp>

#include "test_util.hpp"

namespace fs = std::filesystem;
using p2l_test::kFixtures;
using p2l_test::kSchemas;
using p2l_test::read_file;

namespace {

struct Run {
  int code;
  std::string output;
};

std::string quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) out += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return out + "'";
}

Run run(const std::vector<std::string>& args, const fs::path& scratch) {
  std::string cmd = quote(P2L_CLI_PATH);
  for (const auto& a : args) cmd += " " + quote(a);
  auto log = scratch / "cli-output.txt";
  cmd += " > " + quote(log.string()) + " 2>&1";
  int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, read_file(log)};
}

const std::string kGoogle = (kSchemas / "google-data-safety.json").string();
const fs::path kPolicy = kFixtures / "corpus" / "easy-booster" / "policy.html";

}  // namespace

TEST(Cli, GenerateWritesLabel) {
  auto dir = p2l_test::temp_dir("cli-gen");
  auto r = run({"generate", "--policy", kPolicy.string(), "--schema", kGoogle, "--app",
                "Easy Booster", "--out", (dir / "out").string()},
               dir);
  ASSERT_EQ(r.code, 0) << r.output;
  for (auto name : {"label.json", "segments.json", "cost.json"}) {
    EXPECT_TRUE(fs::is_regular_file(dir / "out" / name)) << name;
  }
  auto label = nlohmann::json::parse(read_file(dir / "out" / "label.json"));
  EXPECT_EQ(label["schema_ref"], "google-data-safety@2023.1");
}

TEST(Cli, GenerateIsByteIdentical) {
  auto dir = p2l_test::temp_dir("cli-repeat");
  for (auto sub : {"a", "b"}) {
    auto r = run({"generate", "--policy", kPolicy.string(), "--schema", kGoogle, "--out",
                  (dir / sub).string()},
                 dir);
    ASSERT_EQ(r.code, 0) << r.output;
  }
  EXPECT_EQ(read_file(dir / "a" / "label.json"), read_file(dir / "b" / "label.json"));
  EXPECT_EQ(read_file(dir / "a" / "segments.json"), read_file(dir / "b" / "segments.json"));
}

TEST(Cli, ShortPolicyIsRejected) {
  auto dir = p2l_test::temp_dir("cli-short");
  std::ofstream(dir / "short.txt") << p2l_test::words(150) << ".\n";
  auto r = run({"generate", "--policy", (dir / "short.txt").string(), "--schema", kGoogle,
                "--out", (dir / "out").string()},
               dir);
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.output.find("TooShort"), std::string::npos) << r.output;
  EXPECT_FALSE(fs::exists(dir / "out" / "label.json"));
}

TEST(Cli, MissingSchemaIsConfigError) {
  auto dir = p2l_test::temp_dir("cli-schema");
  auto r = run({"generate", "--policy", kPolicy.string(), "--schema",
                (dir / "nope.json").string(), "--out", (dir / "out").string()},
               dir);
  EXPECT_EQ(r.code, 4) << r.output;
}

TEST(Cli, BadFlagValueIsConfigError) {
  auto dir = p2l_test::temp_dir("cli-flag");
  EXPECT_EQ(run({"generate", "--policy", kPolicy.string(), "--schema", kGoogle, "--strategy",
                 "magic"},
                dir)
                .code,
            4);
  EXPECT_EQ(run({"generate", "--policy", kPolicy.string(), "--schema", kGoogle, "--tau", "2"},
                dir)
                .code,
            4);
}

TEST(Cli, ReplayMissIsLlmError) {
  auto dir = p2l_test::temp_dir("cli-replay");
  std::ofstream(dir / "replay.json") << "[]";
  auto r = run({"generate", "--policy", kPolicy.string(), "--schema", kGoogle, "--llm",
                "replay", "--replay-file", (dir / "replay.json").string(), "--out",
                (dir / "out").string()},
               dir);
  EXPECT_EQ(r.code, 3) << r.output;
}

TEST(Cli, ConfigFileValuesAreOverriddenByFlags) {
  auto dir = p2l_test::temp_dir("cli-config");
  std::ofstream(dir / "config.json") << nlohmann::json{{"schema", kGoogle},
                                                      {"strategy", "full-llm"},
                                                      {"out", (dir / "cfg").string()}}
                                            .dump();
  auto r = run({"generate", "--config", (dir / "config.json").string(), "--policy",
                kPolicy.string(), "--strategy", "hybrid"},
               dir);
  ASSERT_EQ(r.code, 0) << r.output;
  auto cost = nlohmann::json::parse(read_file(dir / "cfg" / "cost.json"));
  EXPECT_EQ(cost["strategy"], "hybrid");
}

TEST(Cli, SegmentAndClassify) {
  auto dir = p2l_test::temp_dir("cli-seg");
  ASSERT_EQ(run({"segment", "--policy", kPolicy.string(), "--out", (dir / "s").string()}, dir).code,
            0);
  auto segs = nlohmann::json::parse(read_file(dir / "s" / "segments.json"));
  ASSERT_FALSE(segs.empty());
  EXPECT_FALSE(segs[0].contains("categories"));
  ASSERT_EQ(run({"classify", "--policy", kPolicy.string(), "--out", (dir / "c").string()}, dir).code,
            0);
  auto cls = nlohmann::json::parse(read_file(dir / "c" / "segments.json"));
  EXPECT_TRUE(cls[0].contains("categories"));
}

TEST(Cli, CorpusGenerateThenEvalAndAudit) {
  auto dir = p2l_test::temp_dir("cli-corpus");
  auto corpus = (kFixtures / "corpus").string();
  auto labels = (dir / "labels").string();
  auto r = run({"generate", "--corpus", corpus, "--schema", kGoogle, "--out", labels, "--jobs",
                "2"},
               dir);
  ASSERT_EQ(r.code, 0) << r.output;
  r = run({"eval", "--corpus", corpus, "--labels", labels, "--schema", kGoogle, "--out",
           (dir / "eval").string()},
          dir);
  ASSERT_EQ(r.code, 0) << r.output;
  EXPECT_NE(r.output.find("precision"), std::string::npos);
  auto report = nlohmann::json::parse(read_file(dir / "eval" / "eval_report.json"));
  EXPECT_EQ(report["corpus_size"], 10);
  r = run({"audit", "--corpus", corpus, "--labels", labels, "--schema", kGoogle, "--out",
           (dir / "audit").string()},
          dir);
  ASSERT_EQ(r.code, 0) << r.output;
  auto audit = nlohmann::json::parse(read_file(dir / "audit" / "audit_report.json"));
  EXPECT_EQ(audit["underclaims"]["total"], 20);
}

TEST(Cli, TrainClassifier) {
  auto dir = p2l_test::temp_dir("cli-train");
  nlohmann::json examples = nlohmann::json::array();
  examples.push_back({{"text", "we collect your email address"},
                      {"categories", {"First-Party Collection/Use"}}});
  examples.push_back({{"text", "we share data with advertisers"},
                      {"categories", {"Third-Party Sharing/Collection"}}});
  std::ofstream(dir / "examples.json") << examples.dump();
  auto r = run({"train-classifier", "--examples", (dir / "examples.json").string(), "--out",
                dir.string()},
               dir);
  ASSERT_EQ(r.code, 0) << r.output;
  ASSERT_TRUE(fs::is_regular_file(dir / "classifier.json"));
  r = run({"classify", "--policy", kPolicy.string(), "--classifier",
           "linear:" + (dir / "classifier.json").string(), "--out", (dir / "c").string()},
          dir);
  EXPECT_EQ(r.code, 0) << r.output;
}

TEST(Cli, NoSubcommandIsConfigError) {
  auto dir = p2l_test::temp_dir("cli-none");
  EXPECT_EQ(run({}, dir).code, 4);
  EXPECT_EQ(run({"--help"}, dir).code, 0);
}
