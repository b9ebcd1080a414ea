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

#include "kpgen/phraseness.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>

#include "kpgen/kernels.h"
#include "kpgen/pos_tagger.h"

namespace kpgen {
namespace {

constexpr double kNormEps = 1e-5;

void require(bool ok, const std::string& field) {
  if (!ok) throw std::invalid_argument("invalid phraseness config: " + field);
}

Matrix gather(const Matrix& table, std::span<const int> ids) {
  Matrix out(static_cast<Eigen::Index>(ids.size()), table.cols());
  for (size_t i = 0; i < ids.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = table.row(ids[i]);
  }
  return out;
}

Matrix hconcat(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows(), a.cols() + b.cols());
  out << a, b;
  return out;
}

}  // namespace

void PhrasenessConfig::validate() const {
  require(enc_layers >= 1, "enc_layers");
  require(dec_layers >= 1, "dec_layers");
  require(d_model >= 1, "d_model");
  require(heads >= 1 && d_model % heads == 0, "heads");
  require(pos_emb_dim >= 1, "pos_emb_dim");
  require(ff_dim >= 1, "ff_dim");
  require(enc_vocab > kNumSpecial, "enc_vocab");
  require(dec_vocab > kNumSpecial, "dec_vocab");
  require(dropout >= 0.0 && dropout < 1.0, "dropout");
  require(max_src_len >= 1, "max_src_len");
  require(max_ref_len >= 0, "max_ref_len");
  require(max_tgt_len >= 2, "max_tgt_len");
}

Vocabularies build_vocabularies(std::span<const Document> docs,
                                std::span<const std::vector<Phrase>> phrases,
                                int enc_vocab, int dec_vocab) {
  std::unordered_map<std::string, long> enc_counts, dec_counts;
  Vocabularies v;
  for (const Document& doc : docs) {
    for (size_t i = 0; i < doc.tokens.size(); ++i) {
      ++enc_counts[doc.tokens[i]];
      if (i < doc.tags.size()) v.pos.observe(doc.tokens[i], doc.tags[i]);
    }
  }
  for (const auto& list : phrases) {
    for (const Phrase& p : list) {
      for (const std::string& t : p.tokens) ++dec_counts[t];
    }
  }
  v.encoder = Vocabulary::from_counts(enc_counts, enc_vocab);
  v.decoder = Vocabulary::from_counts(dec_counts, dec_vocab);
  v.pos.finalize();
  return v;
}

int AugmentedInput::extended_id(std::string_view word,
                                const Vocabulary& decoder) const {
  if (decoder.contains(word)) return decoder.id(word);
  auto it = std::find(copy_only_words.begin(), copy_only_words.end(), word);
  if (it == copy_only_words.end()) return kUnkId;
  return decoder_vocab_size + static_cast<int>(it - copy_only_words.begin());
}

std::vector<std::string> AugmentedInput::extended_vocabulary(
    const Vocabulary& decoder) const {
  std::vector<std::string> out = decoder.words();
  out.insert(out.end(), copy_only_words.begin(), copy_only_words.end());
  return out;
}

AugmentedInput build_augmented_input(std::span<const std::string> tokens,
                                     std::span<const std::string> tags,
                                     std::span<const Phrase> references,
                                     const Vocabularies& vocabs,
                                     int max_src_len, int max_ref_len) {
  if (tags.size() != tokens.size()) {
    throw std::invalid_argument("build_augmented_input: tags and tokens differ in length");
  }
  AugmentedInput in;
  auto push = [&](const std::string& tok, std::string tag) {
    in.tokens.push_back(tok);
    in.tags.push_back(std::move(tag));
  };
  const std::string special(kSpecialTag);
  push(std::string(kBos), special);
  const size_t n = std::min(tokens.size(), static_cast<size_t>(max_src_len));
  for (size_t i = 0; i < n; ++i) push(tokens[i], tags[i]);
  push(std::string(kBor), special);
  int used = 0;
  for (const Phrase& ref : references) {
    const int cost = static_cast<int>(ref.tokens.size()) + (in.references_used ? 1 : 0);
    if (used + cost > max_ref_len) break;
    if (in.references_used) push(std::string(kSep), special);
    for (const std::string& t : ref.tokens) push(t, vocabs.pos.tag(t));
    used += cost;
    ++in.references_used;
  }
  push(std::string(kEor), special);
  push(std::string(kEos), special);

  const PosTagSet& tagset = PosTagSet::instance();
  in.decoder_vocab_size = vocabs.decoder.size();
  std::unordered_map<std::string, int> copy_only;
  for (size_t i = 0; i < in.tokens.size(); ++i) {
    const std::string& tok = in.tokens[i];
    in.encoder_ids.push_back(vocabs.encoder.id(tok));
    in.tag_ids.push_back(tagset.id(in.tags[i]));
    if (vocabs.decoder.contains(tok)) {
      in.extended_ids.push_back(vocabs.decoder.id(tok));
      continue;
    }
    auto [it, inserted] = copy_only.emplace(
        tok, in.decoder_vocab_size + static_cast<int>(in.copy_only_words.size()));
    if (inserted) in.copy_only_words.push_back(tok);
    in.extended_ids.push_back(it->second);
  }
  return in;
}

PhrasenessModel::PhrasenessModel(PhrasenessConfig config, Vocabularies vocabs,
                                 uint64_t seed)
    : config_(std::move(config)), vocabs_(std::move(vocabs)) {
  config_.validate();
  encoder_.resize(config_.enc_layers);
  decoder_.resize(config_.dec_layers);
  init_parameters(seed);
}

template <typename Fn>
void PhrasenessModel::visit(Fn&& fn) {
  auto lin = [&](Linear& l, const std::string& name) {
    fn(l.weight, name + ".weight");
    fn(l.bias, name + ".bias");
  };
  auto nrm = [&](Norm& n, const std::string& name) {
    fn(n.gain, name + ".gain");
    fn(n.bias, name + ".bias");
  };
  auto att = [&](Attention& a, const std::string& name) {
    lin(a.query, name + ".query");
    lin(a.key, name + ".key");
    lin(a.value, name + ".value");
    lin(a.output, name + ".output");
  };
  fn(enc_word_, "encoder.word_embedding");
  fn(enc_position_, "encoder.position_embedding");
  for (size_t i = 0; i < encoder_.size(); ++i) {
    const std::string p = "encoder.layer" + std::to_string(i);
    EncoderBlock& b = encoder_[i];
    nrm(b.norm1, p + ".norm1");
    att(b.self_attn, p + ".self_attn");
    nrm(b.norm2, p + ".norm2");
    lin(b.ff1, p + ".ff1");
    lin(b.ff2, p + ".ff2");
  }
  nrm(enc_norm_, "encoder.norm");
  fn(dec_word_, "decoder.word_embedding");
  fn(dec_position_, "decoder.position_embedding");
  for (size_t i = 0; i < decoder_.size(); ++i) {
    const std::string p = "decoder.layer" + std::to_string(i);
    DecoderBlock& b = decoder_[i];
    nrm(b.norm1, p + ".norm1");
    att(b.self_attn, p + ".self_attn");
    nrm(b.norm2, p + ".norm2");
    att(b.cross_attn, p + ".cross_attn");
    nrm(b.norm3, p + ".norm3");
    lin(b.ff1, p + ".ff1");
    lin(b.ff2, p + ".ff2");
  }
  nrm(dec_norm_, "decoder.norm");
  fn(pos_tag_, "pos_embedding");
  lin(generator_, "generator");
  fn(switch_state_, "switch.state");
  fn(switch_word_, "switch.word");
  fn(switch_bias_, "switch.bias");
  lin(copy_source_, "copy.source");
  lin(copy_target_, "copy.target");
}

void PhrasenessModel::init_parameters(uint64_t seed) {
  const int d = config_.d_model;
  const int p = config_.pos_emb_dim;
  const int f = config_.ff_dim;
  std::mt19937_64 rng(seed);
  auto normal = [&](Parameter& par, int rows, int cols, double sd) {
    std::normal_distribution<double> dist(0.0, sd);
    par.value.resize(rows, cols);
    for (Eigen::Index i = 0; i < par.value.size(); ++i) par.value.data()[i] = dist(rng);
  };
  auto xavier = [&](Linear& l, int in, int out) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    const double a = std::sqrt(6.0 / (in + out));
    l.weight.value.resize(in, out);
    for (Eigen::Index i = 0; i < l.weight.value.size(); ++i) {
      l.weight.value.data()[i] = a * dist(rng);
    }
    l.bias.value = Matrix::Zero(1, out);
  };
  auto norm_init = [&](Norm& n, int dim) {
    n.gain.value = Matrix::Ones(1, dim);
    n.bias.value = Matrix::Zero(1, dim);
  };
  auto attn_init = [&](Attention& a) {
    xavier(a.query, d, d);
    xavier(a.key, d, d);
    xavier(a.value, d, d);
    xavier(a.output, d, d);
  };
  const double emb_sd = 1.0 / std::sqrt(static_cast<double>(d));
  normal(enc_word_, vocabs_.encoder.size(), d, emb_sd);
  normal(enc_position_, config_.max_positions(), d, emb_sd);
  for (EncoderBlock& b : encoder_) {
    norm_init(b.norm1, d);
    attn_init(b.self_attn);
    norm_init(b.norm2, d);
    xavier(b.ff1, d, f);
    xavier(b.ff2, f, d);
  }
  norm_init(enc_norm_, d);
  normal(dec_word_, vocabs_.decoder.size(), d, emb_sd);
  normal(dec_position_, config_.max_tgt_len, d, emb_sd);
  for (DecoderBlock& b : decoder_) {
    norm_init(b.norm1, d);
    attn_init(b.self_attn);
    norm_init(b.norm2, d);
    attn_init(b.cross_attn);
    norm_init(b.norm3, d);
    xavier(b.ff1, d, f);
    xavier(b.ff2, f, d);
  }
  norm_init(dec_norm_, d);
  normal(pos_tag_, PosTagSet::instance().size(), p,
         1.0 / std::sqrt(static_cast<double>(p)));
  xavier(generator_, d, vocabs_.decoder.size());
  {
    Linear sw;
    xavier(sw, d, 1);
    switch_state_.value = sw.weight.value;
    xavier(sw, d, 1);
    switch_word_.value = sw.weight.value;
    switch_bias_.value = Matrix::Zero(1, 1);
  }
  xavier(copy_source_, d + p, d);
  xavier(copy_target_, d + p, d);
  visit([](Parameter& par, const std::string& name) {
    par.name = name;
    par.zero_grad();
  });
}

std::vector<Parameter*> PhrasenessModel::parameters() {
  std::vector<Parameter*> out;
  visit([&](Parameter& par, const std::string&) { out.push_back(&par); });
  return out;
}

std::vector<const Parameter*> PhrasenessModel::parameters() const {
  std::vector<const Parameter*> out;
  for (Parameter* p : const_cast<PhrasenessModel*>(this)->parameters()) {
    out.push_back(p);
  }
  return out;
}

size_t PhrasenessModel::parameter_count() const {
  size_t n = 0;
  for (const Parameter* p : parameters()) n += static_cast<size_t>(p->value.size());
  return n;
}

AugmentedInput PhrasenessModel::augment(std::span<const std::string> tokens,
                                        std::span<const std::string> tags,
                                        std::span<const Phrase> references) const {
  return build_augmented_input(tokens, tags, references, vocabs_,
                               config_.max_src_len, config_.max_ref_len);
}

std::pair<int, int> PhrasenessModel::decoder_input(std::string_view word) const {
  return {vocabs_.decoder.id(word),
          PosTagSet::instance().id(vocabs_.pos.tag(word))};
}

Graph::Var PhrasenessModel::linear(Graph& g, Graph::Var x, Linear& l) {
  return g.add_row(g.matmul(x, g.param(l.weight)), g.param(l.bias));
}

Graph::Var PhrasenessModel::norm(Graph& g, Graph::Var x, Norm& n) {
  return g.layer_norm(x, g.param(n.gain), g.param(n.bias), kNormEps);
}

Graph::Var PhrasenessModel::drop(Graph& g, Graph::Var x, std::mt19937_64* rng) {
  if (!rng || config_.dropout <= 0.0) return x;
  return g.dropout(x, config_.dropout, *rng);
}

Graph::Var PhrasenessModel::attention(Graph& g, Graph::Var q_in, Graph::Var kv_in,
                                      Attention& a, const Matrix* mask) {
  const int dh = config_.d_model / config_.heads;
  const double inv = 1.0 / std::sqrt(static_cast<double>(dh));
  Graph::Var q = linear(g, q_in, a.query);
  Graph::Var k = linear(g, kv_in, a.key);
  Graph::Var v = linear(g, kv_in, a.value);
  std::vector<Graph::Var> heads;
  for (int h = 0; h < config_.heads; ++h) {
    Graph::Var qh = g.slice_cols(q, h * dh, dh);
    Graph::Var kh = g.slice_cols(k, h * dh, dh);
    Graph::Var vh = g.slice_cols(v, h * dh, dh);
    Graph::Var w = g.softmax_rows(g.scale(g.matmul_nt(qh, kh), inv), mask);
    heads.push_back(g.matmul(w, vh));
  }
  Graph::Var cat = heads.size() == 1 ? heads[0] : g.concat_cols(heads);
  return linear(g, cat, a.output);
}

Graph::Var PhrasenessModel::loss(Graph& g, const AugmentedInput& input,
                                 std::span<const DecoderTarget> targets,
                                 std::mt19937_64* rng) {
  const int src = static_cast<int>(input.tokens.size());
  if (src > config_.max_positions()) {
    throw std::invalid_argument("loss: input longer than max_positions");
  }
  if (targets.empty()) throw std::invalid_argument("loss: no targets");
  const PosTagSet& tagset = PosTagSet::instance();

  std::vector<int> positions(src);
  for (int i = 0; i < src; ++i) positions[i] = i;
  Graph::Var x = g.add(g.gather_rows(enc_word_, input.encoder_ids),
                       g.gather_rows(enc_position_, positions));
  x = drop(g, x, rng);
  for (EncoderBlock& b : encoder_) {
    Graph::Var h = norm(g, x, b.norm1);
    x = g.add(x, drop(g, attention(g, h, h, b.self_attn, nullptr), rng));
    h = norm(g, x, b.norm2);
    x = g.add(x, drop(g, linear(g, g.relu(linear(g, h, b.ff1)), b.ff2), rng));
  }
  Graph::Var memory = norm(g, x, enc_norm_);

  std::vector<int> dec_ids, dec_pos, dec_tags, gold, block_start;
  const int special = tagset.id(kSpecialTag);
  for (const DecoderTarget& t : targets) {
    const int n = static_cast<int>(t.tokens.size());
    if (n == 0) throw std::invalid_argument("loss: empty target");
    if (n + 1 > config_.max_tgt_len) {
      throw std::invalid_argument("loss: target longer than max_tgt_len");
    }
    const int start = static_cast<int>(dec_ids.size());
    dec_ids.push_back(kBosId);
    dec_tags.push_back(special);
    for (int i = 0; i < n; ++i) {
      dec_ids.push_back(vocabs_.decoder.id(t.tokens[i]));
      const std::string tag = i < static_cast<int>(t.tags.size())
                                  ? t.tags[i]
                                  : vocabs_.pos.tag(t.tokens[i]);
      dec_tags.push_back(tagset.id(tag));
    }
    for (int i = 0; i <= n; ++i) {
      dec_pos.push_back(i);
      block_start.push_back(start);
      gold.push_back(i < n ? input.extended_id(t.tokens[i], vocabs_.decoder)
                           : kEosId);
    }
  }
  const int steps = static_cast<int>(dec_ids.size());
  Matrix mask = Matrix::Constant(steps, steps, -std::numeric_limits<double>::infinity());
  for (int r = 0; r < steps; ++r) {
    for (int c = block_start[r]; c <= r; ++c) mask(r, c) = 0.0;
  }

  Graph::Var y_emb = g.gather_rows(dec_word_, dec_ids);
  Graph::Var y = drop(g, g.add(y_emb, g.gather_rows(dec_position_, dec_pos)), rng);
  for (DecoderBlock& b : decoder_) {
    Graph::Var h = norm(g, y, b.norm1);
    y = g.add(y, drop(g, attention(g, h, h, b.self_attn, &mask), rng));
    h = norm(g, y, b.norm2);
    y = g.add(y, drop(g, attention(g, h, memory, b.cross_attn, nullptr), rng));
    h = norm(g, y, b.norm3);
    y = g.add(y, drop(g, linear(g, g.relu(linear(g, h, b.ff1)), b.ff2), rng));
  }
  Graph::Var state = norm(g, y, dec_norm_);

  Graph::Var vocab = g.softmax_rows(linear(g, state, generator_));
  Graph::Var gate = g.sigmoid(g.add_row(
      g.add(g.matmul(state, g.param(switch_state_)),
            g.matmul(y_emb, g.param(switch_word_))),
      g.param(switch_bias_)));

  const int p = config_.pos_emb_dim;
  Graph::Var src_pos = config_.use_pos ? g.gather_rows(pos_tag_, input.tag_ids)
                                       : g.constant(Matrix::Zero(src, p));
  Graph::Var tgt_pos = config_.use_pos ? g.gather_rows(pos_tag_, dec_tags)
                                       : g.constant(Matrix::Zero(steps, p));
  Graph::Var src_parts[] = {memory, src_pos};
  Graph::Var tgt_parts[] = {state, tgt_pos};
  Graph::Var hp = g.tanh(linear(g, g.concat_cols(src_parts), copy_source_));
  Graph::Var sp = g.tanh(linear(g, g.concat_cols(tgt_parts), copy_target_));
  Graph::Var attn = g.softmax_rows(
      g.scale(g.matmul_nt(sp, hp), 1.0 / std::sqrt(static_cast<double>(config_.d_model))));
  return g.copy_mix_nll(vocab, attn, gate, input.extended_ids, gold);
}

namespace {

Matrix apply_linear(const Matrix& x, const Parameter& w, const Parameter& b) {
  Matrix out = x * w.value;
  out.rowwise() += b.value.row(0);
  return out;
}

}  // namespace

EncodedInput PhrasenessModel::encode(const AugmentedInput& input) const {
  const int src = static_cast<int>(input.tokens.size());
  if (src > config_.max_positions()) {
    throw std::invalid_argument("encode: input longer than max_positions");
  }
  const int d = config_.d_model;
  const int dh = d / config_.heads;
  const double inv = 1.0 / std::sqrt(static_cast<double>(dh));
  auto lin = [](const Matrix& x, const Linear& l) {
    return apply_linear(x, l.weight, l.bias);
  };
  auto ln = [](const Matrix& x, const Norm& n) {
    return kernels::layer_norm(x, n.gain.value, n.bias.value, kNormEps);
  };

  std::vector<int> positions(src);
  for (int i = 0; i < src; ++i) positions[i] = i;
  Matrix x = gather(enc_word_.value, input.encoder_ids) +
             gather(enc_position_.value, positions);
  for (const EncoderBlock& b : encoder_) {
    Matrix h = ln(x, b.norm1);
    Matrix q = lin(h, b.self_attn.query);
    Matrix k = lin(h, b.self_attn.key);
    Matrix v = lin(h, b.self_attn.value);
    Matrix cat(src, d);
    for (int hd = 0; hd < config_.heads; ++hd) {
      Matrix w = q.middleCols(hd * dh, dh) * k.middleCols(hd * dh, dh).transpose() * inv;
      kernels::softmax_rows(w);
      cat.middleCols(hd * dh, dh) = w * v.middleCols(hd * dh, dh);
    }
    x += lin(cat, b.self_attn.output);
    h = ln(x, b.norm2);
    x += lin(lin(h, b.ff1).cwiseMax(0.0), b.ff2);
  }

  EncodedInput enc;
  enc.input = input;
  enc.memory = ln(x, enc_norm_);
  for (const DecoderBlock& b : decoder_) {
    enc.cross_keys.push_back(lin(enc.memory, b.cross_attn.key));
    enc.cross_values.push_back(lin(enc.memory, b.cross_attn.value));
  }
  Matrix src_pos = config_.use_pos ? gather(pos_tag_.value, input.tag_ids)
                                   : Matrix(Matrix::Zero(src, config_.pos_emb_dim));
  enc.copy_keys = lin(hconcat(enc.memory, src_pos), copy_source_).array().tanh();
  return enc;
}

DecoderState PhrasenessModel::initial_state() const {
  DecoderState s;
  s.keys.assign(decoder_.size(), Matrix(0, config_.d_model));
  s.values.assign(decoder_.size(), Matrix(0, config_.d_model));
  return s;
}

Matrix PhrasenessModel::step(const EncodedInput& enc,
                             std::span<DecoderState* const> states,
                             std::span<const int> decoder_ids,
                             std::span<const int> tag_ids,
                             const StepOptions& options, StepTrace* trace) const {
  const int batch = static_cast<int>(states.size());
  if (decoder_ids.size() != states.size() || tag_ids.size() != states.size()) {
    throw std::invalid_argument("step: batch size mismatch");
  }
  const int d = config_.d_model;
  const int dh = d / config_.heads;
  const double inv = 1.0 / std::sqrt(static_cast<double>(dh));
  auto lin = [](const Matrix& x, const Linear& l) {
    return apply_linear(x, l.weight, l.bias);
  };
  auto ln = [](const Matrix& x, const Norm& n) {
    return kernels::layer_norm(x, n.gain.value, n.bias.value, kNormEps);
  };

  Matrix y_emb = gather(dec_word_.value, decoder_ids);
  Matrix x = y_emb;
  for (int b = 0; b < batch; ++b) {
    if (states[b]->length >= config_.max_tgt_len) {
      throw std::invalid_argument("step: hypothesis longer than max_tgt_len");
    }
    x.row(b) += dec_position_.value.row(states[b]->length);
  }

  for (size_t l = 0; l < decoder_.size(); ++l) {
    const DecoderBlock& blk = decoder_[l];
    Matrix h = ln(x, blk.norm1);
    Matrix q = lin(h, blk.self_attn.query);
    Matrix k = lin(h, blk.self_attn.key);
    Matrix v = lin(h, blk.self_attn.value);
    Matrix cat(batch, d);
    for (int b = 0; b < batch; ++b) {
      Matrix& keys = states[b]->keys[l];
      Matrix& values = states[b]->values[l];
      keys.conservativeResize(keys.rows() + 1, d);
      values.conservativeResize(values.rows() + 1, d);
      keys.row(keys.rows() - 1) = k.row(b);
      values.row(values.rows() - 1) = v.row(b);
      for (int hd = 0; hd < config_.heads; ++hd) {
        Matrix w = q.row(b).segment(hd * dh, dh) *
                   keys.middleCols(hd * dh, dh).transpose() * inv;
        kernels::softmax_rows(w);
        cat.row(b).segment(hd * dh, dh) = w * values.middleCols(hd * dh, dh);
      }
    }
    x += lin(cat, blk.self_attn.output);

    h = ln(x, blk.norm2);
    q = lin(h, blk.cross_attn.query);
    const Matrix& ck = enc.cross_keys[l];
    const Matrix& cv = enc.cross_values[l];
    for (int hd = 0; hd < config_.heads; ++hd) {
      Matrix w = q.middleCols(hd * dh, dh) * ck.middleCols(hd * dh, dh).transpose() * inv;
      kernels::softmax_rows(w);
      cat.middleCols(hd * dh, dh) = w * cv.middleCols(hd * dh, dh);
    }
    x += lin(cat, blk.cross_attn.output);

    h = ln(x, blk.norm3);
    x += lin(lin(h, blk.ff1).cwiseMax(0.0), blk.ff2);
  }
  for (int b = 0; b < batch; ++b) ++states[b]->length;

  const Matrix s = ln(x, dec_norm_);
  Matrix vocab = lin(s, generator_);
  kernels::softmax_rows(vocab);

  Eigen::VectorXd gate(batch);
  const Matrix gate_logit = s * switch_state_.value + y_emb * switch_word_.value;
  for (int b = 0; b < batch; ++b) {
    gate[b] = options.forced_gate
                  ? *options.forced_gate
                  : kernels::sigmoid(gate_logit(b, 0) + switch_bias_.value(0, 0));
  }

  Matrix tgt_pos = config_.use_pos ? gather(pos_tag_.value, tag_ids)
                                   : Matrix(Matrix::Zero(batch, config_.pos_emb_dim));
  Matrix sp = lin(hconcat(s, tgt_pos), copy_target_).array().tanh();
  Matrix attn = sp * enc.copy_keys.transpose() / std::sqrt(static_cast<double>(d));
  kernels::softmax_rows(attn);

  const int vsize = vocabs_.decoder.size();
  Matrix out = Matrix::Zero(batch, enc.input.extended_size());
  const std::vector<int>& ext = enc.input.extended_ids;
  for (int b = 0; b < batch; ++b) {
    out.row(b).head(vsize) = gate[b] * vocab.row(b);
    const double c = 1.0 - gate[b];
    for (size_t i = 0; i < ext.size(); ++i) {
      out(b, ext[i]) += c * attn(b, static_cast<Eigen::Index>(i));
    }
  }
  if (trace) {
    trace->vocab_probs = std::move(vocab);
    trace->copy_attention = std::move(attn);
    trace->gate = std::move(gate);
  }
  return out;
}

std::vector<double> phraseness_step(const PhrasenessModel& model,
                                    const AugmentedInput& input,
                                    std::span<const std::string> prefix,
                                    const StepOptions& options, StepTrace* trace) {
  const EncodedInput enc = model.encode(input);
  DecoderState state = model.initial_state();
  DecoderState* states[] = {&state};
  int id = kBosId;
  int tag = PosTagSet::instance().id(kSpecialTag);
  for (const std::string& w : prefix) {
    model.step(enc, states, std::span<const int>(&id, 1), std::span<const int>(&tag, 1));
    std::tie(id, tag) = model.decoder_input(w);
  }
  Matrix out = model.step(enc, states, std::span<const int>(&id, 1),
                          std::span<const int>(&tag, 1), options, trace);
  return std::vector<double>(out.data(), out.data() + out.cols());
}

}  // namespace kpgen
