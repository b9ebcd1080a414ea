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

#include "kpgen/decoder.h"

#include <algorithm>
#include <cmath>
#include <tuple>
#include <unordered_map>

#include "kpgen/vocabulary.h"

namespace kpgen {

void DecodeConfig::validate() const {
  auto require = [](bool ok, const char* field) {
    if (!ok) throw std::invalid_argument(std::string("invalid decode config: ") + field);
  };
  require(lambda >= 0.0, "lambda");
  require(beam_size >= 1, "beam_size");
  require(beam_depth >= 1, "beam_depth");
  require(alpha >= -1.0 && alpha <= 1.0, "alpha");
  require(beta > 0.0 && beta <= 1.0, "beta");
  require(top_n >= 1, "top_n");
}

std::vector<double> combine_step(std::span<const double> p_pn,
                                 std::span<const double> p_in, double lambda) {
  if (p_pn.size() != p_in.size()) {
    throw std::invalid_argument("combine_step: distributions differ in size");
  }
  std::vector<double> out(p_pn.size());
  double total = 0.0;
  for (size_t i = 0; i < out.size(); ++i) {
    const double a = lambda == 0.0 ? 1.0 : std::pow(p_pn[i], lambda);
    out[i] = a * p_in[i];
    total += out[i];
  }
  if (!(total > 0.0)) throw DegenerateStep("combine_step: no common support");
  for (double& v : out) v /= total;
  return out;
}

namespace {

struct Live {
  BeamHypothesis hyp;
  DecoderState state;
  int decoder_id = kBosId;
  int tag_id = 0;
};

struct Candidate {
  double score;
  int hyp;
  int word;
};

bool better(const Candidate& a, const Candidate& b) {
  if (a.score != b.score) return a.score > b.score;
  if (a.hyp != b.hyp) return a.hyp < b.hyp;
  return a.word < b.word;
}

void keep_best(std::vector<Candidate>& c, size_t n) {
  if (c.size() > n) {
    std::partial_sort(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(n), c.end(), better);
    c.resize(n);
  } else {
    std::sort(c.begin(), c.end(), better);
  }
}

}  // namespace

std::vector<BeamHypothesis> beam_search(const PhrasenessModel& model,
                                        const AugmentedInput& input,
                                        const InformativenessTable& table,
                                        const DecodeConfig& config) {
  config.validate();
  if (config.beam_depth + 1 > model.config().max_tgt_len) {
    throw std::invalid_argument("beam_depth exceeds the model's max_tgt_len");
  }
  const int ext = input.extended_size();
  if (table.size() != ext) {
    throw std::invalid_argument("beam_search: informativeness table size mismatch");
  }
  const Vocabulary& dec = model.vocabularies().decoder;
  auto word_of = [&](int id) -> const std::string& {
    return id < input.decoder_vocab_size
               ? dec.word(id)
               : input.copy_only_words[static_cast<size_t>(id - input.decoder_vocab_size)];
  };
  const size_t width = static_cast<size_t>(config.beam_size);

  const EncodedInput enc = model.encode(input);
  std::vector<Live> live(1);
  live[0].state = model.initial_state();
  live[0].tag_id = PosTagSet::instance().id(kSpecialTag);
  std::vector<BeamHypothesis> finished;

  for (int t = 1; t <= config.beam_depth + 1 && !live.empty(); ++t) {
    std::vector<DecoderState*> states;
    std::vector<int> ids, tags;
    for (Live& l : live) {
      states.push_back(&l.state);
      ids.push_back(l.decoder_id);
      tags.push_back(l.tag_id);
    }
    const Matrix probs = model.step(enc, states, ids, tags);
    const bool words_allowed = t <= config.beam_depth;

    std::vector<Candidate> pool;
    for (size_t h = 0; h < live.size(); ++h) {
      const std::vector<double> p_in = table.distribution(live[h].hyp.tokens);
      std::vector<double> combined;
      try {
        combined = combine_step(
            std::span<const double>(probs.row(static_cast<Eigen::Index>(h)).data(),
                                    static_cast<size_t>(ext)),
            p_in, config.lambda);
      } catch (const DegenerateStep&) {
        continue;
      }
      std::vector<Candidate> mine;
      const double base = live[h].hyp.log_score;
      if (combined[kEosId] > 0.0) {
        mine.push_back({base + std::log(combined[kEosId]), static_cast<int>(h), kEosId});
      }
      if (words_allowed) {
        for (int w = kNumSpecial; w < ext; ++w) {
          if (combined[w] > 0.0) {
            mine.push_back({base + std::log(combined[w]), static_cast<int>(h), w});
          }
        }
      }
      keep_best(mine, width);
      pool.insert(pool.end(), mine.begin(), mine.end());
    }
    keep_best(pool, width);

    std::vector<Live> next;
    for (const Candidate& c : pool) {
      const Live& parent = live[static_cast<size_t>(c.hyp)];
      if (c.word == kEosId) {
        BeamHypothesis done = parent.hyp;
        done.log_score = c.score;
        done.finished = true;
        finished.push_back(std::move(done));
        continue;
      }
      Live child;
      child.hyp = parent.hyp;
      child.hyp.tokens.push_back(word_of(c.word));
      child.hyp.ids.push_back(c.word);
      child.hyp.log_score = c.score;
      child.state = parent.state;
      std::tie(child.decoder_id, child.tag_id) = model.decoder_input(word_of(c.word));
      next.push_back(std::move(child));
    }
    live = std::move(next);
  }

  std::stable_sort(finished.begin(), finished.end(),
                   [](const BeamHypothesis& a, const BeamHypothesis& b) {
                     if (a.log_score != b.log_score) return a.log_score > b.log_score;
                     if (a.tokens.size() != b.tokens.size()) {
                       return a.tokens.size() < b.tokens.size();
                     }
                     return a.tokens < b.tokens;
                   });
  if (finished.size() > width) finished.resize(width);
  return finished;
}

double adjustment_weight(const Phrase& phrase, const Document& doc,
                         const PhraseIndex* bank, double beta) {
  if (auto offset = first_occurrence(phrase, doc)) {
    const double l = std::log2(1.0 + *offset);
    return l / (l + 1.0);
  }
  return bank && bank->contains(phrase.stem_key) ? beta : 1.0;
}

RankedKeyphrases rerank(std::span<const BeamHypothesis> hypotheses,
                        const Document& doc, const PhraseIndex* bank,
                        const DecodeConfig& config) {
  auto ranks_before = [](const ScoredKeyphrase& a, const ScoredKeyphrase& b) {
    if (a.final_score != b.final_score) return a.final_score < b.final_score;
    if (a.phrase.tokens.size() != b.phrase.tokens.size()) {
      return a.phrase.tokens.size() < b.phrase.tokens.size();
    }
    return a.phrase.stem_key < b.phrase.stem_key;
  };

  std::vector<ScoredKeyphrase> scored;
  std::unordered_map<std::string, size_t> seen;
  for (const BeamHypothesis& h : hypotheses) {
    if (!h.finished || h.tokens.empty()) continue;
    ScoredKeyphrase k;
    k.phrase = make_phrase(h.tokens);
    k.raw_score = -h.log_score;
    const double denom =
        std::max(static_cast<double>(h.tokens.size()) + config.alpha, 0.5);
    k.normalized = k.raw_score / denom;
    k.first_offset = first_occurrence(k.phrase, doc);
    k.present = k.first_offset.has_value();
    k.adjustment =
        config.use_adjustment ? adjustment_weight(k.phrase, doc, bank, config.beta) : 1.0;
    k.final_score = k.normalized * k.adjustment;
    auto [it, inserted] = seen.emplace(k.phrase.stem_key, scored.size());
    if (inserted) {
      scored.push_back(std::move(k));
    } else if (ranks_before(k, scored[it->second])) {
      scored[it->second] = std::move(k);
    }
  }
  std::sort(scored.begin(), scored.end(), ranks_before);

  RankedKeyphrases out;
  const size_t n = static_cast<size_t>(config.top_n);
  for (ScoredKeyphrase& k : scored) {
    auto& list = k.present ? out.present : out.absent;
    if (list.size() < n) list.push_back(std::move(k));
  }
  return out;
}

KeyphraseGenerator::KeyphraseGenerator(const PhrasenessModel& model,
                                       const EmbeddingModel& embedding,
                                       const PhraseIndex* index,
                                       RetrievalConfig retrieval, DecodeConfig decode)
    : model_(&model),
      embedding_(&embedding),
      index_(index),
      retrieval_(retrieval),
      decode_(decode) {
  decode_.validate();
  if (decode_.use_pos != model.config().use_pos) {
    throw std::invalid_argument("decode use_pos does not match the model");
  }
}

std::vector<Reference> KeyphraseGenerator::references(const Document& doc) const {
  if (!decode_.use_references || !index_) return {};
  return retrieve(*index_, doc, *embedding_, retrieval_);
}

std::vector<BeamHypothesis> KeyphraseGenerator::search(const Document& doc) const {
  std::vector<Phrase> refs;
  for (Reference& r : references(doc)) refs.push_back(std::move(r.phrase));
  const AugmentedInput input = model_->augment(doc.tokens, doc.tags, refs);
  const InformativenessTable table(
      *embedding_, embedding_->embed_text(doc.tokens),
      input.extended_vocabulary(model_->vocabularies().decoder));
  return beam_search(*model_, input, table, decode_);
}

RankedKeyphrases KeyphraseGenerator::generate(const Document& doc) const {
  const std::vector<BeamHypothesis> hyps = search(doc);
  return rerank(hyps, doc, index_, decode_);
}

}  // namespace kpgen
