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

#include "kpgen/pipeline.h"

#include <atomic>
#include <exception>
#include <mutex>
#include <ostream>
#include <random>
#include <thread>

#include <nlohmann/json.hpp>

#include "kpgen/checkpoint.h"
#include "kpgen/log.h"
#include "kpgen/pos_tagger.h"

namespace kpgen {
namespace {

void require_path(const std::filesystem::path& p, const char* flag) {
  if (p.empty()) throw std::invalid_argument(std::string("missing required ") + flag);
  if (!std::filesystem::exists(p)) {
    throw std::invalid_argument(std::string(flag) + " not found: " + p.string());
  }
}

uint64_t derive_seed(uint64_t seed, uint64_t stream) {
  std::seed_seq seq{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32),
                    static_cast<uint32_t>(stream)};
  uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<uint64_t>(out[0]) << 32) | out[1];
}

const PhraseIndex* maybe_index(const std::optional<PhraseIndex>& index) {
  return index ? &*index : nullptr;
}

}  // namespace

std::vector<Document> load_corpus(const std::filesystem::path& path,
                                  const PipelineConfig& config) {
  const LexiconTagger tagger = LexiconTagger::from_file(
      config.lexicon.empty() ? LexiconTagger::default_lexicon_path() : config.lexicon);
  return read_corpus(path, &tagger);
}

EmbeddingModel load_vectors(const PipelineConfig& config) {
  require_path(config.vectors, "--vectors");
  EmbeddingModel::Options opts;
  opts.raw_dot = config.raw_dot;
  return EmbeddingModel::load(config.vectors, opts);
}

PhrasenessModel train_phraseness(std::span<const Document> corpus,
                                 const EmbeddingModel& embedding,
                                 const PhraseIndex* index,
                                 const PipelineConfig& config,
                                 TrainResult* result) {
  if (corpus.empty()) throw std::invalid_argument("training corpus is empty");
  std::vector<std::vector<Phrase>> phrases;
  std::vector<std::vector<Reference>> refs;
  phrases.reserve(corpus.size());
  refs.reserve(corpus.size());
  const bool use_refs = config.decode.use_references && index != nullptr;
  for (const Document& doc : corpus) {
    phrases.push_back(extract_noun_phrases(doc));
    refs.push_back(use_refs ? retrieve(*index, doc, embedding, config.retrieval)
                            : std::vector<Reference>{});
  }
  PhrasenessConfig model_config = config.model;
  model_config.use_pos = config.decode.use_pos;
  PhrasenessModel model(model_config,
                        build_vocabularies(corpus, phrases, model_config.enc_vocab,
                                           model_config.dec_vocab),
                        derive_seed(config.seed, 1));

  std::mt19937_64 mask_rng(derive_seed(config.seed, 2));
  std::vector<TrainingInstance> instances;
  for (size_t i = 0; i < corpus.size(); ++i) {
    std::vector<TrainingInstance> doc_instances = make_training_instances(
        model, corpus[i], phrases[i], refs[i], config.mask_prob, mask_rng);
    for (TrainingInstance& inst : doc_instances) instances.push_back(std::move(inst));
  }
  log_info("training on " + std::to_string(instances.size()) + " instances from " +
           std::to_string(corpus.size()) + " documents, " +
           std::to_string(model.parameter_count()) + " parameters");

  TrainSchedule schedule = config.schedule;
  schedule.seed = derive_seed(config.seed, 3);
  if (!schedule.on_epoch) {
    schedule.on_epoch = [&](int epoch, double loss) {
      log_info("epoch " + std::to_string(epoch + 1) + " loss " + std::to_string(loss));
    };
  }
  TrainResult r = train(model, instances, schedule);
  if (result) *result = std::move(r);
  return model;
}

std::vector<RankedKeyphrases> predict_documents(const KeyphraseGenerator& generator,
                                                std::span<const Document> docs,
                                                int threads) {
  std::vector<RankedKeyphrases> out(docs.size());
  int n = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  n = std::max(1, std::min<int>(n, static_cast<int>(docs.size())));
  std::atomic<size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  auto worker = [&] {
    for (size_t i = next++; i < docs.size(); i = next++) {
      try {
        out[i] = generator.generate(docs[i]);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!error) error = std::current_exception();
        next = docs.size();
      }
    }
  };
  if (n <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
  return out;
}

std::string prediction_json_line(const std::string& id,
                                 const RankedKeyphrases& ranked) {
  auto list = [](const std::vector<ScoredKeyphrase>& items) {
    nlohmann::json arr = nlohmann::json::array();
    for (const ScoredKeyphrase& k : items) {
      arr.push_back({{"phrase", k.phrase.text()}, {"score", k.final_score}});
    }
    return arr;
  };
  nlohmann::json j;
  j["id"] = id;
  j["present"] = list(ranked.present);
  j["absent"] = list(ranked.absent);
  return j.dump();
}

PhraseBank run_build_index(const PipelineConfig& config) {
  require_path(config.corpus, "--corpus");
  const EmbeddingModel embedding = load_vectors(config);
  const std::vector<Document> corpus = load_corpus(config.corpus, config);
  PhraseBank bank;
  if (config.update_bank) {
    require_path(config.bank, "--bank");
    bank = update_phrase_bank(PhraseBank::load(config.bank), corpus, embedding);
  } else {
    if (config.bank.empty()) throw std::invalid_argument("missing required --bank");
    bank = build_phrase_bank(corpus, embedding, config.min_df);
  }
  bank.save(config.bank);
  log_info("phrase bank: " + std::to_string(bank.size()) + " phrases");
  return bank;
}

TrainResult run_train(const PipelineConfig& config) {
  require_path(config.corpus, "--corpus");
  if (config.checkpoint.empty()) throw std::invalid_argument("missing required --checkpoint");
  const EmbeddingModel embedding = load_vectors(config);
  std::optional<PhraseIndex> index;
  if (config.decode.use_references) {
    require_path(config.bank, "--bank");
    index.emplace(PhraseBank::load(config.bank));
  }
  const std::vector<Document> corpus = load_corpus(config.corpus, config);
  TrainResult result;
  const PhrasenessModel model =
      train_phraseness(corpus, embedding, maybe_index(index), config, &result);
  save_checkpoint(model, config.checkpoint);
  return result;
}

namespace {

struct DecodeAssets {
  PhrasenessModel model;
  EmbeddingModel embedding;
  std::optional<PhraseIndex> index;
};

DecodeAssets load_decode_assets(const PipelineConfig& config) {
  require_path(config.checkpoint, "--checkpoint");
  if (config.decode.use_references) require_path(config.bank, "--bank");
  DecodeAssets a{load_checkpoint(config.checkpoint), load_vectors(config), std::nullopt};
  a.model.set_use_pos(config.decode.use_pos);
  if (!config.bank.empty() && std::filesystem::exists(config.bank)) {
    a.index.emplace(PhraseBank::load(config.bank));
  }
  return a;
}

}  // namespace

void run_predict(const PipelineConfig& config, std::ostream& out) {
  require_path(config.corpus, "--corpus");
  const DecodeAssets assets = load_decode_assets(config);
  const std::vector<Document> docs = load_corpus(config.corpus, config);
  const KeyphraseGenerator generator(assets.model, assets.embedding,
                                     maybe_index(assets.index), config.retrieval,
                                     config.decode);
  const std::vector<RankedKeyphrases> ranked =
      predict_documents(generator, docs, config.threads);
  for (size_t i = 0; i < docs.size(); ++i) {
    out << prediction_json_line(docs[i].id, ranked[i]) << '\n';
  }
}

EvalReport run_evaluate(const PipelineConfig& config) {
  require_path(config.corpus, "--corpus");
  require_path(config.predictions, "--predictions");
  const std::vector<Document> docs = load_corpus(config.corpus, config);
  const std::vector<Prediction> preds = read_predictions(config.predictions);
  return evaluate(docs, preds);
}

AlphaSelection run_tune_alpha(const PipelineConfig& config) {
  require_path(config.validation, "--validation");
  const DecodeAssets assets = load_decode_assets(config);
  const std::vector<Document> docs = load_corpus(config.validation, config);
  const KeyphraseGenerator generator(assets.model, assets.embedding,
                                     maybe_index(assets.index), config.retrieval,
                                     config.decode);
  return select_alpha(generator, docs, config.alpha_grid);
}

DatasetStats run_stats(const PipelineConfig& config) {
  require_path(config.corpus, "--corpus");
  const std::vector<Document> docs = load_corpus(config.corpus, config);
  std::vector<Document> reference;
  if (!config.reference_corpus.empty()) {
    require_path(config.reference_corpus, "--reference-corpus");
    reference = load_corpus(config.reference_corpus, config);
  }
  return dataset_stats(docs, reference);
}

}  // namespace kpgen
