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

#include <benchmark/benchmark.h>

#include <memory>
#include <random>
#include <string>
#include <vector>

#include "kpgen/decoder.h"
#include "kpgen/informativeness.h"
#include "kpgen/log.h"
#include "kpgen/phraseness.h"
#include "kpgen/retriever.h"
#include "kpgen/training.h"

namespace kpgen {
namespace {

struct Workload {
  std::vector<Document> docs;
  std::unique_ptr<EmbeddingModel> embedding;
  std::unique_ptr<PhraseIndex> index;
  std::unique_ptr<PhrasenessModel> model;
};

// 600 random documents over 3000 words, 32-d vectors, a 2-layer d64 model.
const Workload& workload() {
  static const Workload* w = [] {
    auto* out = new Workload;
    std::mt19937_64 rng(42);
    std::normal_distribution<double> g;
    std::vector<std::pair<std::string, std::vector<double>>> rows;
    std::vector<std::string> words;
    for (int i = 0; i < 3000; ++i) {
      words.push_back("w" + std::to_string(i));
      std::vector<double> v(32);
      for (double& x : v) x = g(rng);
      rows.emplace_back(words.back(), std::move(v));
    }
    out->embedding = std::make_unique<EmbeddingModel>(EmbeddingModel::from_rows(rows));
    const char* tags[] = {"JJ", "NN", "NN", "IN"};
    for (int d = 0; d < 600; ++d) {
      std::vector<std::string> toks, tt;
      const size_t base = rng() % 2800;
      for (int i = 0; i < 160; ++i) {
        toks.push_back(i % 4 == 3 ? "of" : words[base + rng() % 200]);
        tt.push_back(tags[i % 4]);
      }
      out->docs.push_back(make_document_from_tokens("d" + std::to_string(d), toks, tt));
    }
    out->index = std::make_unique<PhraseIndex>(build_phrase_bank(out->docs, *out->embedding, 2));
    std::vector<std::vector<Phrase>> nps;
    for (const Document& d : out->docs) nps.push_back(extract_noun_phrases(d));
    PhrasenessConfig cfg;
    cfg.enc_layers = cfg.dec_layers = 2;
    cfg.d_model = 64;
    cfg.heads = 4;
    cfg.pos_emb_dim = 16;
    cfg.ff_dim = 256;
    cfg.max_src_len = 160;
    cfg.max_ref_len = 64;
    out->model = std::make_unique<PhrasenessModel>(
        cfg, build_vocabularies(out->docs, nps, cfg.enc_vocab, cfg.dec_vocab), 7);
    return out;
  }();
  return *w;
}

AugmentedInput input_for(const Workload& w, const Document& doc) {
  std::vector<Phrase> refs;
  for (const Reference& r : retrieve(*w.index, doc, *w.embedding, RetrievalConfig{})) {
    refs.push_back(r.phrase);
  }
  return w.model->augment(doc.tokens, doc.tags, refs);
}

void BM_Retrieve(benchmark::State& state) {
  const Workload& w = workload();
  size_t i = 0;
  for (auto _ : state) {
    const Document& doc = w.docs[i++ % w.docs.size()];
    benchmark::DoNotOptimize(retrieve(*w.index, doc, *w.embedding, RetrievalConfig{}));
  }
  state.counters["bank"] = static_cast<double>(w.index->size());
}
BENCHMARK(BM_Retrieve);

void BM_Encode(benchmark::State& state) {
  const Workload& w = workload();
  const AugmentedInput in = input_for(w, w.docs[0]);
  for (auto _ : state) benchmark::DoNotOptimize(w.model->encode(in));
  state.counters["tokens"] = static_cast<double>(in.tokens.size());
}
BENCHMARK(BM_Encode)->Unit(benchmark::kMillisecond);

void BM_DecoderStep(benchmark::State& state) {
  const Workload& w = workload();
  const EncodedInput enc = w.model->encode(input_for(w, w.docs[0]));
  const int batch = static_cast<int>(state.range(0));
  const auto [id, tag] = w.model->decoder_input("[BOS]");
  const std::vector<int> ids(batch, id), tags(batch, tag);
  for (auto _ : state) {
    std::vector<DecoderState> states(batch, w.model->initial_state());
    std::vector<DecoderState*> ptrs;
    for (DecoderState& s : states) ptrs.push_back(&s);
    benchmark::DoNotOptimize(w.model->step(enc, ptrs, ids, tags));
  }
  state.SetItemsProcessed(state.iterations() * batch);
}
BENCHMARK(BM_DecoderStep)->Arg(1)->Arg(20)->Arg(100);

void BM_Informativeness(benchmark::State& state) {
  const Workload& w = workload();
  const Document& doc = w.docs[0];
  const AugmentedInput in = input_for(w, doc);
  const std::vector<std::string> ext = in.extended_vocabulary(w.model->vocabularies().decoder);
  const Vector x = w.embedding->embed_text(doc.tokens);
  for (auto _ : state) benchmark::DoNotOptimize(InformativenessTable(*w.embedding, x, ext));
  state.counters["vocab"] = static_cast<double>(ext.size());
}
BENCHMARK(BM_Informativeness);

void BM_BeamSearch(benchmark::State& state) {
  const Workload& w = workload();
  const Document& doc = w.docs[1];
  const AugmentedInput in = input_for(w, doc);
  const InformativenessTable table(*w.embedding, w.embedding->embed_text(doc.tokens),
                                   in.extended_vocabulary(w.model->vocabularies().decoder));
  DecodeConfig cfg;
  cfg.beam_size = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(beam_search(*w.model, in, table, cfg));
}
BENCHMARK(BM_BeamSearch)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_GenerateDocument(benchmark::State& state) {
  const Workload& w = workload();
  DecodeConfig cfg;
  cfg.beam_size = 20;
  const KeyphraseGenerator gen(*w.model, *w.embedding, w.index.get(), RetrievalConfig{}, cfg);
  size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(gen.generate(w.docs[i++ % w.docs.size()]));
}
BENCHMARK(BM_GenerateDocument)->Unit(benchmark::kMillisecond);

void BM_TrainStep(benchmark::State& state) {
  const Workload& w = workload();
  const int batch = static_cast<int>(state.range(0));
  std::mt19937_64 rng(3);
  std::vector<TrainingInstance> instances;
  for (size_t d = 0; static_cast<int>(instances.size()) < batch; ++d) {
    const Document& doc = w.docs[d];
    const auto refs = retrieve(*w.index, doc, *w.embedding, RetrievalConfig{});
    for (TrainingInstance& inst :
         make_training_instances(*w.model, doc, extract_noun_phrases(doc), refs, 0.5, rng)) {
      if (static_cast<int>(instances.size()) < batch) instances.push_back(std::move(inst));
    }
  }
  PhrasenessModel& model = *w.model;
  TrainSchedule schedule;
  schedule.epochs = 1;
  schedule.batch_size = batch;
  for (auto _ : state) benchmark::DoNotOptimize(train(model, instances, schedule));
  state.SetItemsProcessed(state.iterations() * batch);
}
BENCHMARK(BM_TrainStep)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace kpgen

int main(int argc, char** argv) {
  kpgen::set_log_sink([](kpgen::LogLevel, const std::string&) {});
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
