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

#include <algorithm>
#include <stdexcept>

#include "kpgen/vocabulary.h"

namespace kpgen {
namespace {

double bounded(const EmbeddingModel& model, double dot) {
  const double s = std::max(0.0, dot);
  return model.raw_dot() ? s : std::min(1.0, s);
}

}  // namespace

InformativenessTable::InformativenessTable(
    const EmbeddingModel& model, Vector doc_embedding,
    std::span<const std::string> extended_vocabulary, double floor)
    : model_(&model), doc_(std::move(doc_embedding)) {
  if (doc_.size() != model.dim()) {
    throw std::invalid_argument("informativeness: document embedding dimension");
  }
  if (extended_vocabulary.size() <= static_cast<size_t>(kEosId)) {
    throw std::invalid_argument("informativeness: vocabulary lacks specials");
  }
  scores_.resize(extended_vocabulary.size());
  for (size_t i = 0; i < extended_vocabulary.size(); ++i) {
    if (static_cast<int>(i) == kEosId) {
      scores_[i] = 0.0;
      continue;
    }
    const std::string& w = extended_vocabulary[i];
    double s = 0.0;
    if (model.lookup(w)) {
      s = bounded(model, model.embed_text(std::span<const std::string>(&w, 1)).dot(doc_));
    }
    scores_[i] = std::max(floor, s);
    word_total_ += scores_[i];
  }
}

double InformativenessTable::eos_score(std::span<const std::string> prefix) const {
  if (prefix.empty()) return 0.0;
  return bounded(*model_, model_->embed_text(prefix).dot(doc_));
}

std::vector<double> InformativenessTable::distribution(
    std::span<const std::string> prefix) const {
  const double eos = eos_score(prefix);
  const double z = normalizer(eos);
  std::vector<double> out(scores_.size());
  for (size_t i = 0; i < scores_.size(); ++i) out[i] = scores_[i] / z;
  out[kEosId] = eos / z;
  return out;
}

}  // namespace kpgen
