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

// End-to-end workflows shared by the command-line tool and tests.

#ifndef KPGEN_PIPELINE_H_
#define KPGEN_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "kpgen/corpus.h"
#include "kpgen/decoder.h"
#include "kpgen/embedding.h"
#include "kpgen/evaluation.h"
#include "kpgen/phraseness.h"
#include "kpgen/retriever.h"
#include "kpgen/training.h"

namespace kpgen {

struct PipelineConfig {
  std::filesystem::path corpus;
  std::filesystem::path vectors;
  std::filesystem::path bank;
  std::filesystem::path checkpoint;
  std::filesystem::path output;
  std::filesystem::path predictions;
  std::filesystem::path validation;
  std::filesystem::path reference_corpus;
  // POS seed file; empty selects the bundled lexicon.
  std::filesystem::path lexicon;

  // build-index extends an existing bank instead of replacing it.
  bool update_bank = false;
  int min_df = 5;
  bool raw_dot = false;

  RetrievalConfig retrieval;
  PhrasenessConfig model;
  TrainSchedule schedule;
  double mask_prob = 0.5;
  DecodeConfig decode;
  std::vector<double> alpha_grid = default_alpha_grid();

  // Fixes initialization, masking and shuffling.
  uint64_t seed = 0;
  // Decoding threads; 0 uses the hardware concurrency.
  int threads = 0;
};

std::vector<Document> load_corpus(const std::filesystem::path& path,
                                  const PipelineConfig& config);
EmbeddingModel load_vectors(const PipelineConfig& config);

// Trains a phraseness model on an unlabeled corpus. References come from
// `index` unless references are disabled or `index` is null.
PhrasenessModel train_phraseness(std::span<const Document> corpus,
                                 const EmbeddingModel& embedding,
                                 const PhraseIndex* index,
                                 const PipelineConfig& config,
                                 TrainResult* result = nullptr);

// Decodes documents in parallel; output order follows the input.
std::vector<RankedKeyphrases> predict_documents(const KeyphraseGenerator& generator,
                                                std::span<const Document> docs,
                                                int threads);

std::string prediction_json_line(const std::string& id,
                                 const RankedKeyphrases& ranked);

// Command workflows. Each checks its input paths first and throws
// std::invalid_argument naming the missing one.
PhraseBank run_build_index(const PipelineConfig& config);
TrainResult run_train(const PipelineConfig& config);
void run_predict(const PipelineConfig& config, std::ostream& out);
EvalReport run_evaluate(const PipelineConfig& config);
AlphaSelection run_tune_alpha(const PipelineConfig& config);
DatasetStats run_stats(const PipelineConfig& config);

}  // namespace kpgen

#endif  // KPGEN_PIPELINE_H_
