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

#ifndef KPGEN_EMBEDDING_H_
#define KPGEN_EMBEDDING_H_

#include <Eigen/Core>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace kpgen {

using Vector = Eigen::VectorXd;
using RowMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Word-vector table behind the additive (unigram-mean) text embedding. By
// default every stored vector is L2-normalized, so that dot products of text
// embeddings are cosines.
class EmbeddingModel {
 public:
  struct Options {
    // Keep vectors as read and skip normalization of text embeddings; the
    // similarity is then an unbounded clamped dot product.
    bool raw_dot = false;
  };

  EmbeddingModel() = default;

  // Text format: optional header "<count> <dim>", then "word f1 ... fdim".
  // Throws FormatError naming the line for malformed rows or a dimension
  // mismatch. Duplicate words keep the last row and log a warning.
  static EmbeddingModel load(const std::filesystem::path& path,
                             const Options& options);
  static EmbeddingModel load(const std::filesystem::path& path) {
    return load(path, Options{});
  }

  // In-memory construction, same normalization and duplicate rules as load().
  static EmbeddingModel from_rows(
      const std::vector<std::pair<std::string, std::vector<double>>>& rows,
      const Options& options);
  static EmbeddingModel from_rows(
      const std::vector<std::pair<std::string, std::vector<double>>>& rows) {
    return from_rows(rows, Options{});
  }

  int dim() const { return static_cast<int>(table_.cols()); }
  size_t size() const { return index_.size(); }
  bool raw_dot() const { return options_.raw_dot; }

  // nullopt marks an out-of-vocabulary word.
  std::optional<Eigen::Map<const Vector>> lookup(const std::string& word) const;

  // Mean of the in-vocabulary token vectors, L2-normalized (unless raw_dot).
  // The zero vector iff no token is in the vocabulary.
  Vector embed_text(std::span<const std::string> tokens) const;

  // S(a, b) = max(0, v_a . v_b).
  double similarity(std::span<const std::string> a,
                    std::span<const std::string> b) const;

  const std::vector<std::string>& warnings() const { return warnings_; }

 private:
  void add_row(const std::string& word, const std::vector<double>& values);

  Options options_;
  std::unordered_map<std::string, int> index_;
  RowMatrix table_;
  int rows_ = 0;
  std::vector<std::string> warnings_;
};

// max(0, a . b) over precomputed embeddings.
double clamped_dot(const Vector& a, const Vector& b);

}  // namespace kpgen

#endif  // KPGEN_EMBEDDING_H_
