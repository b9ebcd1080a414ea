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

#include "kpgen/informativeness.h"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "kpgen/vocabulary.h"

namespace kpgen {
namespace {

using Strings = std::vector<std::string>;

Strings with_specials(const Strings& words) {
  Strings out = Vocabulary().words();
  out.insert(out.end(), words.begin(), words.end());
  return out;
}

Vector doc_vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

// Vectors chosen so that S(w1, x) = 0.6, S(w2, x) = 0.2 and the prefix
// {w2} scores 0.2 as well.
class ExampleTest : public ::testing::Test {
 protected:
  ExampleTest()
      : model_(EmbeddingModel::from_rows(
            {{"w1", {0.6, 0.8, 0}}, {"w2", {0.2, 0, std::sqrt(1 - 0.04)}}})),
        table_(model_, doc_vec({1, 0, 0}), with_specials({"w1", "w2"})) {}
  EmbeddingModel model_;
  InformativenessTable table_;
};

TEST_F(ExampleTest, HandNormalization) {
  const Strings prefix = {"w2"};
  const std::vector<double> p = informativeness_step(table_, prefix);
  const double eps = kInformativenessFloor;
  const double z = 0.6 + 0.2 + 0.2 + 6 * eps;
  EXPECT_NEAR(p[kNumSpecial], 0.6 / z, 1e-12);
  EXPECT_NEAR(p[kNumSpecial + 1], 0.2 / z, 1e-12);
  EXPECT_NEAR(p[kEosId], 0.2 / z, 1e-12);
  EXPECT_NEAR(p[kPadId], eps / z, 1e-15);
  EXPECT_NEAR(table_.normalizer(table_.eos_score(prefix)), z, 1e-12);
}

TEST_F(ExampleTest, EmptyPrefixNeverEnds) {
  EXPECT_EQ(informativeness_step(table_, {})[kEosId], 0.0);
  EXPECT_EQ(table_.eos_score({}), 0.0);
}

TEST_F(ExampleTest, OovWordsGetTheFloor) {
  const InformativenessTable t(model_, doc_vec({1, 0, 0}), with_specials({"w1", "zzz"}));
  EXPECT_EQ(t.word_score(kNumSpecial + 1), kInformativenessFloor);
  EXPECT_NEAR(t.word_score(kNumSpecial), 0.6, 1e-15);
}

TEST_F(ExampleTest, NegativeSimilarityFloored) {
  const InformativenessTable t(model_, doc_vec({-1, 0, 0}), with_specials({"w1"}));
  EXPECT_EQ(t.word_score(kNumSpecial), kInformativenessFloor);
}

TEST_F(ExampleTest, DimensionAndSizeChecks) {
  EXPECT_THROW(InformativenessTable(model_, doc_vec({1, 0}), with_specials({})),
               std::invalid_argument);
  EXPECT_THROW(InformativenessTable(model_, doc_vec({1, 0, 0}), Strings{"a"}),
               std::invalid_argument);
}

class RandomTableTest : public ::testing::Test {
 protected:
  void SetUp() override {
    std::mt19937_64 rng(13);
    std::normal_distribution<double> g;
    std::vector<std::pair<std::string, std::vector<double>>> rows;
    for (int i = 0; i < 40; ++i) {
      words_.push_back("v" + std::to_string(i));
      std::vector<double> v(5);
      for (double& x : v) x = g(rng);
      rows.emplace_back(words_.back(), v);
    }
    model_ = EmbeddingModel::from_rows(rows);
    Strings doc;
    for (int i = 0; i < 10; ++i) doc.push_back(words_[rng() % words_.size()]);
    doc_ = model_.embed_text(doc);
    ext_ = with_specials(words_);
    ext_.push_back("copy-only-oov");
  }
  Strings random_prefix(std::mt19937_64& rng) const {
    Strings p;
    const int n = static_cast<int>(rng() % 5);
    for (int i = 0; i < n; ++i) p.push_back(ext_[kNumSpecial + rng() % (ext_.size() - kNumSpecial)]);
    return p;
  }
  Strings words_, ext_;
  EmbeddingModel model_;
  Vector doc_;
};

TEST_F(RandomTableTest, ValidDistributions) {
  const InformativenessTable t(model_, doc_, ext_);
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    const std::vector<double> p = t.distribution(random_prefix(rng));
    double total = 0.0;
    for (double x : p) {
      EXPECT_GE(x, 0.0);
      total += x;
    }
    EXPECT_NEAR(total, 1.0, 1e-6);
  }
}

TEST_F(RandomTableTest, CachedScoresMatchDirectSimilarity) {
  const InformativenessTable t(model_, doc_, ext_);
  for (size_t i = kNumSpecial; i < words_.size() + kNumSpecial; ++i) {
    const std::string& w = ext_[i];
    const double direct = std::max(0.0, model_.embed_text(Strings{w}).dot(doc_));
    EXPECT_NEAR(t.word_score(static_cast<int>(i)), std::max(kInformativenessFloor, direct), 1e-9);
  }
}

TEST_F(RandomTableTest, NonEosScoresIndependentOfPrefix) {
  const InformativenessTable t(model_, doc_, ext_);
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    const Strings a = random_prefix(rng), b = random_prefix(rng);
    const std::vector<double> pa = t.distribution(a), pb = t.distribution(b);
    const double ratio = t.normalizer(t.eos_score(a)) / t.normalizer(t.eos_score(b));
    for (size_t w = 0; w < pa.size(); ++w) {
      if (static_cast<int>(w) == kEosId) continue;
      EXPECT_NEAR(pb[w], pa[w] * ratio, 1e-12);
    }
  }
}

TEST_F(RandomTableTest, MonotoneInSimilarity) {
  const InformativenessTable t(model_, doc_, ext_);
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const std::vector<double> p = t.distribution(random_prefix(rng));
    for (int a = kNumSpecial; a < t.size(); ++a) {
      for (int b = kNumSpecial; b < t.size(); ++b) {
        if (t.word_score(a) > t.word_score(b)) EXPECT_GT(p[a], p[b]);
      }
    }
  }
}

TEST(InformativenessRawDotTest, RawDotIsNotCapped) {
  EmbeddingModel::Options o;
  o.raw_dot = true;
  const EmbeddingModel m = EmbeddingModel::from_rows({{"big", {3, 0}}}, o);
  const InformativenessTable t(m, doc_vec({2, 0}), with_specials({"big"}));
  EXPECT_NEAR(t.word_score(kNumSpecial), 6.0, 1e-12);
}

}  // namespace
}  // namespace kpgen
