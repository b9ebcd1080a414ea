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

#include "kpgen/embedding.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include <unistd.h>

#include "kpgen/corpus.h"

namespace kpgen {
namespace {

using Strings = std::vector<std::string>;
using Rows = std::vector<std::pair<std::string, std::vector<double>>>;

class VectorFileTest : public ::testing::Test {
 protected:
  void SetUp() override {
    path_ = std::filesystem::temp_directory_path() /
            ("kpgen_vec_" + std::to_string(::getpid()) + ".txt");
  }
  void TearDown() override { std::filesystem::remove(path_); }
  void write(const std::string& s) { std::ofstream(path_) << s; }
  std::filesystem::path path_;
};

TEST_F(VectorFileTest, LoadsWithHeader) {
  write("3 4\na 1 0 0 0\nb 0 2 0 0\nc 1 1 1 1\n");
  const EmbeddingModel m = EmbeddingModel::load(path_);
  EXPECT_EQ(m.size(), 3u);
  EXPECT_EQ(m.dim(), 4);
  const auto b = m.lookup("b");
  ASSERT_TRUE(b);
  EXPECT_DOUBLE_EQ((*b)(1), 1.0);
  EXPECT_NEAR(m.lookup("c")->norm(), 1.0, 1e-12);
  EXPECT_FALSE(m.lookup("z"));
}

TEST_F(VectorFileTest, LoadsWithoutHeader) {
  write("a 1 0\nb 0 1\n");
  const EmbeddingModel m = EmbeddingModel::load(path_);
  EXPECT_EQ(m.size(), 2u);
  EXPECT_EQ(m.dim(), 2);
}

TEST_F(VectorFileTest, WrongWidthNamesLine) {
  write("2 4\na 1 0 0 0\nb 1 0 0\n");
  try {
    EmbeddingModel::load(path_);
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find(":3"), std::string::npos) << e.what();
  }
}

TEST_F(VectorFileTest, MalformedValue) {
  write("a 1 x\n");
  EXPECT_THROW(EmbeddingModel::load(path_), FormatError);
}

TEST_F(VectorFileTest, DuplicateLastWinsWithWarning) {
  write("a 1 0\na 0 1\n");
  const EmbeddingModel m = EmbeddingModel::load(path_);
  EXPECT_EQ(m.size(), 1u);
  EXPECT_DOUBLE_EQ((*m.lookup("a"))(1), 1.0);
  EXPECT_FALSE(m.warnings().empty());
}

TEST(EmbeddingTest, MissingFile) {
  EXPECT_THROW(EmbeddingModel::load("/nonexistent/vectors.txt"), FormatError);
}

TEST(EmbeddingTest, MeanOfOneIsNormalizedVector) {
  const EmbeddingModel m = EmbeddingModel::from_rows({{"w", {3, 4}}});
  const Vector v = m.embed_text(Strings{"w"});
  EXPECT_NEAR(v(0), 0.6, 1e-15);
  EXPECT_NEAR(v(1), 0.8, 1e-15);
}

TEST(EmbeddingTest, MeanOfTwo) {
  const EmbeddingModel m = EmbeddingModel::from_rows({{"u", {1, 0, 0}}, {"v", {0, 1, 0}}});
  const Vector e = m.embed_text(Strings{"u", "v", "oov"});
  EXPECT_NEAR(e(0), std::sqrt(0.5), 1e-15);
  EXPECT_NEAR(e(1), std::sqrt(0.5), 1e-15);
  EXPECT_NEAR(e(2), 0.0, 1e-15);
}

TEST(EmbeddingTest, AllOovIsZero) {
  const EmbeddingModel m = EmbeddingModel::from_rows({{"u", {1, 0}}});
  EXPECT_EQ(m.embed_text(Strings{"x", "y"}).norm(), 0.0);
  EXPECT_EQ(m.embed_text(Strings{}).norm(), 0.0);
  EXPECT_EQ(m.similarity(Strings{"x"}, Strings{"u"}), 0.0);
}

TEST(EmbeddingTest, SimilarityExamples) {
  const EmbeddingModel m = EmbeddingModel::from_rows(
      {{"a", {1, 0}}, {"b", {0, 1}}, {"c", {-0.3, std::sqrt(1 - 0.09)}}});
  EXPECT_NEAR(m.similarity(Strings{"a", "b"}, Strings{"b", "a"}), 1.0, 1e-12);
  EXPECT_EQ(m.similarity(Strings{"a"}, Strings{"b"}), 0.0);
  EXPECT_EQ(m.similarity(Strings{"a"}, Strings{"c"}), 0.0);
}

TEST(EmbeddingTest, RawDotKeepsMagnitudes) {
  EmbeddingModel::Options o;
  o.raw_dot = true;
  const EmbeddingModel m = EmbeddingModel::from_rows({{"a", {2, 0}}, {"b", {3, 0}}}, o);
  EXPECT_TRUE(m.raw_dot());
  EXPECT_NEAR(m.similarity(Strings{"a"}, Strings{"b"}), 6.0, 1e-12);
}

TEST(EmbeddingTest, SimilarityProperties) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  Rows rows;
  Strings vocab;
  for (int i = 0; i < 30; ++i) {
    std::vector<double> v(6);
    for (double& x : v) x = g(rng);
    vocab.push_back("w" + std::to_string(i));
    rows.emplace_back(vocab.back(), v);
  }
  const EmbeddingModel m = EmbeddingModel::from_rows(rows);
  for (int trial = 0; trial < 500; ++trial) {
    Strings a, b;
    const int na = 1 + static_cast<int>(rng() % 5), nb = 1 + static_cast<int>(rng() % 5);
    for (int i = 0; i < na; ++i) a.push_back(vocab[rng() % vocab.size()]);
    for (int i = 0; i < nb; ++i) b.push_back(vocab[rng() % vocab.size()]);
    const double s = m.similarity(a, b);
    EXPECT_GE(s, 0.0);
    EXPECT_LE(s, 1.0 + 1e-12);
    EXPECT_EQ(s, m.similarity(b, a));
    Strings shuffled = a;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    EXPECT_NEAR((m.embed_text(a) - m.embed_text(shuffled)).norm(), 0.0, 1e-12);
  }
}

TEST(EmbeddingTest, ClampedDot) {
  Vector a(2), b(2);
  a << 1, 0;
  b << -1, 0;
  EXPECT_EQ(clamped_dot(a, b), 0.0);
  EXPECT_EQ(clamped_dot(a, a), 1.0);
}

TEST(EmbeddingTest, InconsistentRowsThrow) {
  EXPECT_THROW(EmbeddingModel::from_rows({{"a", {1, 0}}, {"b", {1}}}), FormatError);
}

}  // namespace
}  // namespace kpgen
