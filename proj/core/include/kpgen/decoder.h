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

// Product-of-experts decoding.
//
// Each step combines the two experts as p(w) ∝ p_pn(w)^lambda * p_in(w) and
// a hypothesis accumulates log p(w) over its words and the closing [EOS].
// Finished hypotheses are rescored as
//
//   s'(y) = -score(y) / max(|y| + alpha, 0.5) * b(y)
//
// with b(y) = beta for absent phrases found in the phrase bank, 1 for other
// absent phrases and log2(1 + o) / (log2(1 + o) + 1) for present phrases
// whose first occurrence starts at 1-indexed token offset o. Lower is better.

#ifndef KPGEN_DECODER_H_
#define KPGEN_DECODER_H_

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "kpgen/corpus.h"
#include "kpgen/embedding.h"
#include "kpgen/informativeness.h"
#include "kpgen/phraseness.h"
#include "kpgen/retriever.h"

namespace kpgen {

struct DecodeConfig {
  double lambda = 0.75;
  int beam_size = 100;
  int beam_depth = kMaxPhraseLength;
  double alpha = 0.0;
  double beta = 5.0 / 6.0;
  // Per category.
  int top_n = 10;
  bool use_references = true;
  bool use_pos = true;
  bool use_adjustment = true;

  // Throws std::invalid_argument naming the offending field.
  void validate() const;
};

class DegenerateStep : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Entrywise p_pn^lambda * p_in, renormalized. Throws std::invalid_argument on
// a size mismatch and DegenerateStep when every product is zero.
std::vector<double> combine_step(std::span<const double> p_pn,
                                 std::span<const double> p_in, double lambda);

struct BeamHypothesis {
  std::vector<std::string> tokens;  // words only, no [EOS]
  std::vector<int> ids;             // extended-vocabulary ids
  double log_score = 0.0;
  bool finished = false;
};

// Beam search over the combined distribution. Only non-special words and
// [EOS] are expanded; zero-probability continuations are pruned. Every step
// keeps the beam_size best continuations of all live hypotheses; those ending
// in [EOS] finish. After beam_depth words only [EOS] is allowed, so phrases
// have 1..beam_depth words. Results are ordered by score (higher first), then
// by length and tokens.
std::vector<BeamHypothesis> beam_search(const PhrasenessModel& model,
                                        const AugmentedInput& input,
                                        const InformativenessTable& table,
                                        const DecodeConfig& config);

// Bank membership test for absent phrases; nullptr means an empty bank.
double adjustment_weight(const Phrase& phrase, const Document& doc,
                         const PhraseIndex* bank, double beta);

struct ScoredKeyphrase {
  Phrase phrase;
  double raw_score = 0.0;    // -log-score
  double normalized = 0.0;   // raw / max(|y| + alpha, 0.5)
  double adjustment = 1.0;   // b(y)
  double final_score = 0.0;  // normalized * adjustment
  bool present = false;
  std::optional<int> first_offset;
};

struct RankedKeyphrases {
  std::vector<ScoredKeyphrase> present;
  std::vector<ScoredKeyphrase> absent;
};

// Rescores finished hypotheses, removes stemmed duplicates (keeping the best),
// splits by presence and keeps top_n of each, ascending by final score with
// ties broken by length, then stem key.
RankedKeyphrases rerank(std::span<const BeamHypothesis> hypotheses,
                        const Document& doc, const PhraseIndex* bank,
                        const DecodeConfig& config);

// Retrieval, encoding, beam search and reranking for single documents over
// frozen assets. Safe to share across threads.
class KeyphraseGenerator {
 public:
  KeyphraseGenerator(const PhrasenessModel& model, const EmbeddingModel& embedding,
                     const PhraseIndex* index, RetrievalConfig retrieval,
                     DecodeConfig decode);

  const DecodeConfig& decode_config() const { return decode_; }
  const PhraseIndex* index() const { return index_; }

  std::vector<Reference> references(const Document& doc) const;
  std::vector<BeamHypothesis> search(const Document& doc) const;
  RankedKeyphrases generate(const Document& doc) const;

 private:
  const PhrasenessModel* model_;
  const EmbeddingModel* embedding_;
  const PhraseIndex* index_;
  RetrievalConfig retrieval_;
  DecodeConfig decode_;
};

}  // namespace kpgen

#endif  // KPGEN_DECODER_H_
