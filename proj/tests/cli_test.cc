// Copyright 2026 The kpgen Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.h"

#include <gtest/gtest.h>

#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "support/scratch_dir.h"
#include "support/synthetic_corpus.h"

namespace kpgen {
namespace {

using testing::ScratchDir;

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

struct CliResult {
  int status = 0;
  std::string out;
  std::string err;
};

CliResult run(std::vector<std::string> args) {
  args.insert(args.begin(), "kpgen");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  CliResult r;
  r.status = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

class CliTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    testing::SyntheticOptions o;
    o.train_docs = 60;
    o.test_docs = 8;
    o.topics = 3;
    o.general_nouns = 10;
    o.dim = 16;
    o.seed = 5;
    corpus_ = new testing::SyntheticCorpus(testing::make_synthetic_corpus(o));
  }
  static void TearDownTestSuite() {
    delete corpus_;
    corpus_ = nullptr;
  }

  void SetUp() override {
    testing::write_corpus_jsonl(dir_ / "train.jsonl", corpus_->train);
    testing::write_corpus_jsonl(dir_ / "test.jsonl", corpus_->test);
    testing::write_vectors(dir_ / "vectors.txt", corpus_->vectors);
    std::ofstream cfg(dir_ / "run.cfg");
    cfg << "# toy run\n"
        << "vectors = " << (dir_ / "vectors.txt").string() << "\n"
        << "bank = " << (dir_ / "bank.jsonl").string() << "\n"
        << "min-df = 2\n"
        << "enc-layers = 1\ndec-layers = 1\nd-model = 16\nheads = 2\npos-dim = 4\n"
        << "ff-dim = 32\nmax-src-len = 96\nmax-ref-len = 24\n"
        << "epochs = 1\nbatch-size = 16\nlr = 0.001\n"
        << "beam-size = 8\ntop-n = 5\nseed = 7\nquiet = true\n";
  }

  std::string path(const char* name) const { return (dir_ / name).string(); }
  std::vector<std::string> with_config(std::vector<std::string> args) const {
    args.push_back("--config");
    args.push_back(path("run.cfg"));
    return args;
  }

  static testing::SyntheticCorpus* corpus_;
  ScratchDir dir_{"cli"};
};

testing::SyntheticCorpus* CliTest::corpus_ = nullptr;

TEST_F(CliTest, FullWorkflowIsDeterministic) {
  ASSERT_EQ(run(with_config({"build-index", "--corpus", path("train.jsonl")})).status, 0);
  const CliResult t = run(with_config({"train", "--corpus", path("train.jsonl"),
                                       "--checkpoint", path("model.ckpt")}));
  ASSERT_EQ(t.status, 0) << t.err;
  EXPECT_NE(t.out.find("epoch 1 loss"), std::string::npos);

  for (const char* name : {"p1.jsonl", "p2.jsonl"}) {
    const CliResult p = run(with_config({"predict", "--corpus", path("test.jsonl"),
                                         "--checkpoint", path("model.ckpt"), "--threads", "2",
                                         "--output", path(name)}));
    ASSERT_EQ(p.status, 0) << p.err;
  }
  const std::string p1 = slurp(dir_ / "p1.jsonl");
  EXPECT_FALSE(p1.empty());
  EXPECT_EQ(p1, slurp(dir_ / "p2.jsonl"));

  const CliResult e = run(with_config({"evaluate", "--corpus", path("test.jsonl"),
                                       "--predictions", path("p1.jsonl"), "--json"}));
  ASSERT_EQ(e.status, 0) << e.err;
  const auto report = nlohmann::json::parse(e.out);
  EXPECT_TRUE(report.contains("present_f1@5"));

  const CliResult tune = run(with_config({"tune-alpha", "--validation", path("test.jsonl"),
                                          "--checkpoint", path("model.ckpt"),
                                          "--alpha-grid", "-0.5,0,0.5"}));
  ASSERT_EQ(tune.status, 0) << tune.err;
  EXPECT_EQ(nlohmann::json::parse(tune.out)["grid"].size(), 3u);

  const CliResult s = run({"stats", "--corpus", path("test.jsonl")});
  ASSERT_EQ(s.status, 0) << s.err;
  EXPECT_EQ(nlohmann::json::parse(s.out)["documents"], 8);
}

TEST_F(CliTest, RetrainingGivesIdenticalCheckpoints) {
  ASSERT_EQ(run(with_config({"build-index", "--corpus", path("train.jsonl")})).status, 0);
  for (const char* name : {"a.ckpt", "b.ckpt"}) {
    ASSERT_EQ(run(with_config({"train", "--corpus", path("train.jsonl"), "--checkpoint",
                               path(name)}))
                  .status,
              0);
  }
  EXPECT_EQ(slurp(dir_ / "a.ckpt"), slurp(dir_ / "b.ckpt"));
}

TEST_F(CliTest, UpdateEqualsFreshBuild) {
  const auto& train = corpus_->train;
  const std::vector<Document> first(train.begin(), train.begin() + 25);
  const std::vector<Document> second(train.begin() + 25, train.end());
  testing::write_corpus_jsonl(dir_ / "first.jsonl", first);
  testing::write_corpus_jsonl(dir_ / "second.jsonl", second);
  ASSERT_EQ(run(with_config({"build-index", "--corpus", path("first.jsonl"), "--bank",
                             path("inc.jsonl")}))
                .status,
            0);
  ASSERT_EQ(run(with_config({"build-index", "--update", "--corpus", path("second.jsonl"),
                             "--bank", path("inc.jsonl")}))
                .status,
            0);
  ASSERT_EQ(run(with_config({"build-index", "--corpus", path("train.jsonl"), "--bank",
                             path("fresh.jsonl")}))
                .status,
            0);
  EXPECT_EQ(slurp(dir_ / "inc.jsonl"), slurp(dir_ / "fresh.jsonl"));
}

TEST_F(CliTest, NoReferencesNeedsNoBank) {
  const CliResult t = run(with_config({"train", "--no-references", "--bank",
                                       path("absent.jsonl"), "--corpus", path("train.jsonl"),
                                       "--checkpoint", path("model.ckpt")}));
  ASSERT_EQ(t.status, 0) << t.err;
  const CliResult p = run(with_config({"predict", "--no-references", "--bank",
                                       path("absent.jsonl"), "--corpus", path("test.jsonl"),
                                       "--checkpoint", path("model.ckpt")}));
  ASSERT_EQ(p.status, 0) << p.err;
  EXPECT_FALSE(p.out.empty());
}

TEST_F(CliTest, MissingInputFails) {
  const CliResult r = run(with_config({"train", "--corpus", path("nope.jsonl"),
                                       "--checkpoint", path("model.ckpt")}));
  EXPECT_NE(r.status, 0);
  EXPECT_NE(r.err.find("--corpus"), std::string::npos);

  const CliResult p = run({"predict", "--corpus", path("test.jsonl")});
  EXPECT_NE(p.status, 0);
  EXPECT_NE(p.err.find("--checkpoint"), std::string::npos);
}

TEST_F(CliTest, SchemaViolationsFail) {
  EXPECT_NE(run({}).status, 0);
  EXPECT_NE(run({"frobnicate"}).status, 0);
  EXPECT_NE(run({"stats", "--beam-size", "many"}).status, 0);
  EXPECT_NE(run({"stats", "--corpus", path("test.jsonl"), "--beam-size", "0"}).status, 0);
  {
    std::ofstream bad(dir_ / "bad.cfg");
    bad << "beam-sise = 10\n";
  }
  EXPECT_NE(run({"stats", "--corpus", path("test.jsonl"), "--config", path("bad.cfg")}).status,
            0);
}

TEST_F(CliTest, FlagsOverrideConfig) {
  ASSERT_EQ(run(with_config({"build-index", "--corpus", path("train.jsonl")})).status, 0);
  ASSERT_EQ(run(with_config({"train", "--corpus", path("train.jsonl"), "--checkpoint",
                             path("model.ckpt")}))
                .status,
            0);
  const CliResult p = run(with_config({"predict", "--corpus", path("test.jsonl"),
                                       "--checkpoint", path("model.ckpt"), "--top-n", "2"}));
  ASSERT_EQ(p.status, 0) << p.err;
  std::istringstream lines(p.out);
  std::string line;
  while (std::getline(lines, line)) {
    const auto j = nlohmann::json::parse(line);
    EXPECT_LE(j["present"].size(), 2u);
    EXPECT_LE(j["absent"].size(), 2u);
  }
}

TEST(CliHelpTest, HelpExitsZero) {
  EXPECT_EQ(run({"--help"}).status, 0);
}

}  // namespace
}  // namespace kpgen
