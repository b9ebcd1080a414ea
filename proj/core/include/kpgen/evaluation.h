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

#ifndef KPGEN_EVALUATION_H_
#define KPGEN_EVALUATION_H_

#include <array>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kpgen/corpus.h"
#include "kpgen/decoder.h"

namespace kpgen {

// Stemmed exact match.
bool match(const Phrase& pred, const Phrase& gold);

struct PrfScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Scores the first k predictions (fewer if fewer were returned; the
// precision denominator is the number actually scored). Predictions are
// deduplicated by stem key first. Throws std::invalid_argument for k <= 0.
PrfScore score_document(std::span<const Phrase> preds,
                        std::span<const Phrase> golds, int k);

enum class MetricMode { kF1, kRecall };
double score_document(std::span<const Phrase> preds,
                      std::span<const Phrase> golds, int k, MetricMode mode);

// Ranked predictions for one document.
struct Prediction {
  std::string id;
  std::vector<Phrase> present;
  std::vector<Phrase> absent;
};

Prediction to_prediction(const std::string& id, const RankedKeyphrases& ranked);

// {"id", "present": [{"phrase", "score"}...], "absent": [...]} per line.
std::vector<Prediction> read_predictions(const std::filesystem::path& path);

struct DocumentScores {
  std::string id;
  int present_golds = 0;
  int absent_golds = 0;
  // Unset when the document has no gold keyphrase of that kind.
  std::optional<double> present_f1_at_3, present_f1_at_5;
  std::optional<double> absent_r_at_5, absent_r_at_10;
};

struct EvalReport {
  double present_f1_at_3 = 0.0;
  double present_f1_at_5 = 0.0;
  double absent_r_at_5 = 0.0;
  double absent_r_at_10 = 0.0;
  int documents = 0;
  int present_documents = 0;
  int absent_documents = 0;
  std::vector<DocumentScores> per_document;

  std::array<double, 4> metrics() const {
    return {present_f1_at_3, present_f1_at_5, absent_r_at_5, absent_r_at_10};
  }
};

// Macro averages over documents with at least one gold of the category.
// Gold keyphrases are split by presence in the document. Documents without
// a prediction are scored as empty predictions; predictions for unknown ids
// are ignored.
EvalReport evaluate(std::span<const Document> docs,
                    std::span<const Prediction> predictions);

std::string report_json(const EvalReport& report, bool per_document = false);
std::string report_table(const EvalReport& report);

std::vector<double> default_alpha_grid();

struct AlphaSelection {
  double alpha = 0.0;
  std::vector<double> grid;
  std::vector<std::array<double, 4>> metrics;
  std::vector<double> geometric_means;
};

// Divides each metric column by its maximum over the grid (dropping columns
// whose maximum is 0) and returns the alpha with the largest geometric mean;
// ties go to the smaller alpha.
AlphaSelection select_alpha(std::span<const double> grid,
                            std::span<const std::array<double, 4>> metrics);

// Decodes every validation document once and reranks per grid value.
// Throws std::invalid_argument on an empty validation set or grid.
AlphaSelection select_alpha(const KeyphraseGenerator& generator,
                            std::span<const Document> validation,
                            std::span<const double> grid);

struct DatasetStats {
  int documents = 0;
  double kps_per_doc = 0.0;
  // Mean over documents with gold keyphrases of their absent percentage.
  double pct_absent = 0.0;
  // Absent percentage over all gold keyphrases pooled.
  double pct_absent_pooled = 0.0;
  // Percentage of gold keyphrases that are gold keyphrases or noun phrases of
  // the reference corpus.
  std::optional<double> pct_overlap;
};

// Gold keyphrases are deduplicated by stem key per document.
DatasetStats dataset_stats(std::span<const Document> docs,
                           std::span<const Document> reference_corpus = {});

std::string stats_json(const DatasetStats& stats);

}  // namespace kpgen

#endif  // KPGEN_EVALUATION_H_
