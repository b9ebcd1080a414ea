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

// Informativeness distribution over the extended vocabulary:
//
//   P_in(w | y_<t, x)     = max(eps, S(w, x)) / Z
//   P_in([EOS] | y_<t, x) = S(y_<t, x) / Z
//
// where S is the embedding similarity and Z normalizes over all entries.
// Words without a vector (markers, [UNK]) score eps.

#ifndef KPGEN_INFORMATIVENESS_H_
#define KPGEN_INFORMATIVENESS_H_

#include <span>
#include <string>
#include <vector>

#include "kpgen/embedding.h"

namespace kpgen {

inline constexpr double kInformativenessFloor = 1e-4;

class InformativenessTable {
 public:
  InformativenessTable(const EmbeddingModel& model, Vector doc_embedding,
                       std::span<const std::string> extended_vocabulary,
                       double floor = kInformativenessFloor);

  int size() const { return static_cast<int>(scores_.size()); }

  // Floored S(w, x); the [EOS] slot holds 0 and is prefix-dependent.
  double word_score(int id) const { return scores_[id]; }

  // S(prefix, x), unfloored.
  double eos_score(std::span<const std::string> prefix) const;

  // Z for a given [EOS] score.
  double normalizer(double eos_score) const { return word_total_ + eos_score; }

  // Full normalized distribution.
  std::vector<double> distribution(std::span<const std::string> prefix) const;

 private:
  const EmbeddingModel* model_;
  Vector doc_;
  std::vector<double> scores_;
  double word_total_ = 0.0;
};

// P_in(. | prefix, x) over the table's extended vocabulary.
inline std::vector<double> informativeness_step(
    const InformativenessTable& table, std::span<const std::string> prefix) {
  return table.distribution(prefix);
}

}  // namespace kpgen

#endif  // KPGEN_INFORMATIVENESS_H_
