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

// Retrieval-augmented Transformer encoder-decoder with a copy mechanism.
//
// The source is the document followed by a block of retrieved phrases:
//
//   [BOS] x_1 ... x_n [BOR] z_1 [SEP] z_2 ... [EOR] [EOS]
//
// At step t the decoder state s_t yields
//
//   P(w) = g_t * softmax(W s_t)[w] + (1 - g_t) * sum_{i : src_i = w} a_t[i]
//
// where g_t = sigmoid(w_s . s_t + w_y . emb(y_{t-1}) + b) and the copy
// attention a_t = softmax_i(FF_h([h_i; pos(src_i)]) . FF_s([s_t; pos(y_{t-1})])
// / sqrt(d)) sees part-of-speech embeddings on both sides. Words of the
// extended vocabulary that are not in the decoder vocabulary can only be
// copied.

#ifndef KPGEN_PHRASENESS_H_
#define KPGEN_PHRASENESS_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kpgen/corpus.h"
#include "kpgen/graph.h"
#include "kpgen/vocabulary.h"

namespace kpgen {

struct PhrasenessConfig {
  int enc_layers = 3;
  int dec_layers = 3;
  int d_model = 256;
  int heads = 8;
  int pos_emb_dim = 64;
  int ff_dim = 1024;
  int enc_vocab = 40000;
  int dec_vocab = 40000;
  double dropout = 0.1;
  // Document tokens kept before the reference block.
  int max_src_len = 384;
  // Tokens (including [SEP]) allowed in the reference block; references that
  // do not fit are dropped whole.
  int max_ref_len = 128;
  // Target tokens including the closing [EOS].
  int max_tgt_len = kMaxPhraseLength + 1;
  bool use_pos = true;

  int max_positions() const { return max_src_len + max_ref_len + 4; }

  // Throws std::invalid_argument naming the offending field.
  void validate() const;
};

struct Vocabularies {
  Vocabulary encoder;
  Vocabulary decoder;
  PosLexicon pos;
};

// Encoder vocabulary from all document tokens, decoder vocabulary from the
// tokens of the given noun phrases, POS lexicon from document tags.
Vocabularies build_vocabularies(std::span<const Document> docs,
                                std::span<const std::vector<Phrase>> phrases,
                                int enc_vocab, int dec_vocab);

struct AugmentedInput {
  std::vector<std::string> tokens;
  std::vector<std::string> tags;
  std::vector<int> encoder_ids;
  std::vector<int> tag_ids;
  std::vector<int> extended_ids;
  // Source words outside the decoder vocabulary; word i has extended id
  // decoder_vocab_size + i.
  std::vector<std::string> copy_only_words;
  int decoder_vocab_size = 0;
  int references_used = 0;

  int extended_size() const {
    return decoder_vocab_size + static_cast<int>(copy_only_words.size());
  }

  // Decoder id if the word is in V, else its copy-only id, else kUnkId.
  int extended_id(std::string_view word, const Vocabulary& decoder) const;

  // V followed by the copy-only words.
  std::vector<std::string> extended_vocabulary(const Vocabulary& decoder) const;
};

// Lays out [BOS] x [BOR] z_1 [SEP] ... [EOR] [EOS]. The document is cut to
// max_src_len tokens; references are appended in the given order while they
// fit into max_ref_len. Reference tokens are tagged with the POS lexicon.
AugmentedInput build_augmented_input(std::span<const std::string> tokens,
                                     std::span<const std::string> tags,
                                     std::span<const Phrase> references,
                                     const Vocabularies& vocabs,
                                     int max_src_len, int max_ref_len);

struct DecoderTarget {
  std::vector<std::string> tokens;  // without [EOS]
  std::vector<std::string> tags;
};

// Encoder output and the source-side tensors reused at every decoding step.
struct EncodedInput {
  AugmentedInput input;
  Matrix memory;                     // S x d
  std::vector<Matrix> cross_keys;    // per decoder layer, S x d
  std::vector<Matrix> cross_values;  // per decoder layer, S x d
  Matrix copy_keys;                  // FF_h([h; pos]), S x d
};

// Self-attention cache of one partial hypothesis.
struct DecoderState {
  std::vector<Matrix> keys;    // per layer, t x d
  std::vector<Matrix> values;  // per layer, t x d
  int length = 0;
};

struct StepOptions {
  // Overrides the generate/copy switch, e.g. 1 for pure generation.
  std::optional<double> forced_gate;
};

// Intermediate quantities of a step, one row per batch entry.
struct StepTrace {
  Matrix vocab_probs;     // B x |V|
  Matrix copy_attention;  // B x S
  Eigen::VectorXd gate;   // B
};

class PhrasenessModel {
 public:
  PhrasenessModel(PhrasenessConfig config, Vocabularies vocabs, uint64_t seed);

  PhrasenessModel(PhrasenessModel&&) = default;
  PhrasenessModel& operator=(PhrasenessModel&&) = default;
  PhrasenessModel(const PhrasenessModel&) = delete;
  PhrasenessModel& operator=(const PhrasenessModel&) = delete;

  const PhrasenessConfig& config() const { return config_; }
  const Vocabularies& vocabularies() const { return vocabs_; }

  // Zeroes part-of-speech features on both sides of the copy attention.
  void set_use_pos(bool use_pos) { config_.use_pos = use_pos; }

  // Stable order; names are unique and used by checkpoints.
  std::vector<Parameter*> parameters();
  std::vector<const Parameter*> parameters() const;
  size_t parameter_count() const;

  AugmentedInput augment(std::span<const std::string> tokens,
                         std::span<const std::string> tags,
                         std::span<const Phrase> references) const;

  // Summed negative log-likelihood of `targets` (each followed by [EOS])
  // given one shared input. All targets are decoded in a single pass with a
  // block-diagonal causal mask. Dropout is applied when `rng` is non-null.
  Graph::Var loss(Graph& g, const AugmentedInput& input,
                  std::span<const DecoderTarget> targets,
                  std::mt19937_64* rng);

  // Inference.
  EncodedInput encode(const AugmentedInput& input) const;
  DecoderState initial_state() const;

  // Feeds one token per state (decoder ids and POS tag ids of the previous
  // word, [BOS] first) and returns the next-word distributions over the
  // extended vocabulary, one row per state.
  Matrix step(const EncodedInput& enc, std::span<DecoderState* const> states,
              std::span<const int> decoder_ids, std::span<const int> tag_ids,
              const StepOptions& options = {}, StepTrace* trace = nullptr) const;

  // Decoder-side ids for a word: (decoder id or UNK, POS tag id).
  std::pair<int, int> decoder_input(std::string_view word) const;

 private:
  struct Linear {
    Parameter weight;  // in x out
    Parameter bias;    // 1 x out
  };
  struct Norm {
    Parameter gain;
    Parameter bias;
  };
  struct Attention {
    Linear query, key, value, output;
  };
  struct EncoderBlock {
    Norm norm1;
    Attention self_attn;
    Norm norm2;
    Linear ff1, ff2;
  };
  struct DecoderBlock {
    Norm norm1;
    Attention self_attn;
    Norm norm2;
    Attention cross_attn;
    Norm norm3;
    Linear ff1, ff2;
  };

  void init_parameters(uint64_t seed);
  template <typename Fn>
  void visit(Fn&& fn);

  Graph::Var linear(Graph& g, Graph::Var x, Linear& l);
  Graph::Var norm(Graph& g, Graph::Var x, Norm& n);
  Graph::Var attention(Graph& g, Graph::Var q, Graph::Var kv, Attention& a,
                       const Matrix* mask);
  Graph::Var drop(Graph& g, Graph::Var x, std::mt19937_64* rng);

  PhrasenessConfig config_;
  Vocabularies vocabs_;

  Parameter enc_word_, enc_position_;
  Parameter dec_word_, dec_position_;
  Parameter pos_tag_;
  std::vector<EncoderBlock> encoder_;
  Norm enc_norm_;
  std::vector<DecoderBlock> decoder_;
  Norm dec_norm_;
  Linear generator_;
  Parameter switch_state_, switch_word_, switch_bias_;
  Linear copy_source_, copy_target_;
};

// Distribution over the extended vocabulary of `input` for the word following
// `prefix`. Prefix words outside the decoder vocabulary are fed as [UNK].
std::vector<double> phraseness_step(const PhrasenessModel& model,
                                    const AugmentedInput& input,
                                    std::span<const std::string> prefix,
                                    const StepOptions& options = {},
                                    StepTrace* trace = nullptr);

}  // namespace kpgen

#endif  // KPGEN_PHRASENESS_H_
