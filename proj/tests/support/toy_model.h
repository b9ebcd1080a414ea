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

// Small randomly initialized models and inputs for unit and property tests.

#ifndef KPGEN_TESTS_SUPPORT_TOY_MODEL_H_
#define KPGEN_TESTS_SUPPORT_TOY_MODEL_H_

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "kpgen/corpus.h"
#include "kpgen/embedding.h"
#include "kpgen/phraseness.h"

namespace kpgen::testing {

// "w0", "w1", ...
std::vector<std::string> toy_words(int n, const std::string& prefix = "w");

struct ToySpec {
  int decoder_words = 6;
  // Encoder-only words, outside the decoder vocabulary.
  int extra_words = 3;
  int d_model = 8;
  int layers = 1;
  int heads = 2;
  int pos_emb_dim = 4;
  int ff_dim = 16;
  int max_src_len = 24;
  int max_ref_len = 12;
  int max_tgt_len = 7;
  bool use_pos = true;
  double dropout = 0.0;
};

Vocabularies toy_vocabularies(const ToySpec& spec);
PhrasenessModel toy_model(const ToySpec& spec, uint64_t seed);

// Words a toy model knows: decoder words first, then the extra words.
std::vector<std::string> toy_lexicon(const ToySpec& spec);

// Random document over the toy lexicon plus unseen words, with random tags.
struct ToyText {
  std::vector<std::string> tokens;
  std::vector<std::string> tags;
};
ToyText random_text(const ToySpec& spec, int length, std::mt19937_64& rng);

// Random references over the toy lexicon.
std::vector<Phrase> random_references(const ToySpec& spec, int count,
                                      std::mt19937_64& rng);

// Unit vectors for every toy lexicon word.
EmbeddingModel toy_embedding(const ToySpec& spec, int dim, uint64_t seed);

}  // namespace kpgen::testing

#endif  // KPGEN_TESTS_SUPPORT_TOY_MODEL_H_
