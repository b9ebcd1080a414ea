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

#include "kpgen/evaluation.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "kpgen/tokenizer.h"

namespace kpgen {
namespace {

std::vector<Phrase> dedup(std::span<const Phrase> phrases) {
  std::vector<Phrase> out;
  std::unordered_set<std::string> seen;
  for (const Phrase& p : phrases) {
    if (p.tokens.empty()) continue;
    if (seen.insert(p.stem_key).second) out.push_back(p);
  }
  return out;
}

double mean(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

std::vector<Phrase> phrases_from_json(const nlohmann::json& list) {
  std::vector<Phrase> out;
  for (const auto& item : list) {
    const std::string text =
        item.is_string() ? item.get<std::string>() : item.at("phrase").get<std::string>();
    std::vector<std::string> tokens = tokenize(text);
    if (!tokens.empty()) out.push_back(make_phrase(std::move(tokens)));
  }
  return out;
}

}  // namespace

bool match(const Phrase& pred, const Phrase& gold) {
  return pred.stem_key == gold.stem_key;
}

PrfScore score_document(std::span<const Phrase> preds,
                        std::span<const Phrase> golds, int k) {
  if (k <= 0) throw std::invalid_argument("score_document: k must be positive");
  const std::vector<Phrase> p = dedup(preds);
  const std::vector<Phrase> g = dedup(golds);
  const size_t n = std::min(p.size(), static_cast<size_t>(k));
  std::unordered_set<std::string> gold_keys;
  for (const Phrase& x : g) gold_keys.insert(x.stem_key);
  int hits = 0;
  for (size_t i = 0; i < n; ++i) hits += gold_keys.count(p[i].stem_key) ? 1 : 0;
  PrfScore s;
  if (n > 0) s.precision = static_cast<double>(hits) / static_cast<double>(n);
  if (!g.empty()) s.recall = static_cast<double>(hits) / static_cast<double>(g.size());
  if (hits > 0) {
    s.f1 = 2.0 * static_cast<double>(hits) / static_cast<double>(n + g.size());
  }
  return s;
}

double score_document(std::span<const Phrase> preds,
                      std::span<const Phrase> golds, int k, MetricMode mode) {
  const PrfScore s = score_document(preds, golds, k);
  return mode == MetricMode::kF1 ? s.f1 : s.recall;
}

Prediction to_prediction(const std::string& id, const RankedKeyphrases& ranked) {
  Prediction p;
  p.id = id;
  for (const ScoredKeyphrase& k : ranked.present) p.present.push_back(k.phrase);
  for (const ScoredKeyphrase& k : ranked.absent) p.absent.push_back(k.phrase);
  return p;
}

std::vector<Prediction> read_predictions(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open predictions " + path.string());
  std::vector<Prediction> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = path.string() + ":" + std::to_string(lineno) + ": ";
    try {
      const nlohmann::json j = nlohmann::json::parse(line);
      Prediction p;
      p.id = j.at("id").is_string() ? j.at("id").get<std::string>() : j.at("id").dump();
      if (j.contains("present")) p.present = phrases_from_json(j.at("present"));
      if (j.contains("absent")) p.absent = phrases_from_json(j.at("absent"));
      out.push_back(std::move(p));
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(where + e.what());
    }
  }
  return out;
}

EvalReport evaluate(std::span<const Document> docs,
                    std::span<const Prediction> predictions) {
  std::unordered_map<std::string, const Prediction*> by_id;
  for (const Prediction& p : predictions) by_id.emplace(p.id, &p);
  static const Prediction kEmpty;

  EvalReport r;
  std::vector<double> f3, f5, r5, r10;
  for (const Document& doc : docs) {
    auto it = by_id.find(doc.id);
    const Prediction& pred = it == by_id.end() ? kEmpty : *it->second;
    std::vector<Phrase> present, absent;
    for (const Phrase& g : dedup(doc.gold_keyphrases)) {
      (is_present(g, doc) ? present : absent).push_back(g);
    }
    DocumentScores ds;
    ds.id = doc.id;
    ds.present_golds = static_cast<int>(present.size());
    ds.absent_golds = static_cast<int>(absent.size());
    if (!present.empty()) {
      ds.present_f1_at_3 = score_document(pred.present, present, 3).f1;
      ds.present_f1_at_5 = score_document(pred.present, present, 5).f1;
      f3.push_back(*ds.present_f1_at_3);
      f5.push_back(*ds.present_f1_at_5);
    }
    if (!absent.empty()) {
      ds.absent_r_at_5 = score_document(pred.absent, absent, 5).recall;
      ds.absent_r_at_10 = score_document(pred.absent, absent, 10).recall;
      r5.push_back(*ds.absent_r_at_5);
      r10.push_back(*ds.absent_r_at_10);
    }
    r.per_document.push_back(std::move(ds));
  }
  r.documents = static_cast<int>(docs.size());
  r.present_documents = static_cast<int>(f3.size());
  r.absent_documents = static_cast<int>(r5.size());
  r.present_f1_at_3 = mean(f3);
  r.present_f1_at_5 = mean(f5);
  r.absent_r_at_5 = mean(r5);
  r.absent_r_at_10 = mean(r10);
  return r;
}

std::string report_json(const EvalReport& report, bool per_document) {
  nlohmann::json j;
  j["documents"] = report.documents;
  j["present_documents"] = report.present_documents;
  j["absent_documents"] = report.absent_documents;
  j["present_f1@3"] = report.present_f1_at_3;
  j["present_f1@5"] = report.present_f1_at_5;
  j["absent_r@5"] = report.absent_r_at_5;
  j["absent_r@10"] = report.absent_r_at_10;
  if (per_document) {
    auto opt = [](const std::optional<double>& v) {
      return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
    };
    nlohmann::json docs = nlohmann::json::array();
    for (const DocumentScores& d : report.per_document) {
      docs.push_back({{"id", d.id},
                      {"present_golds", d.present_golds},
                      {"absent_golds", d.absent_golds},
                      {"present_f1@3", opt(d.present_f1_at_3)},
                      {"present_f1@5", opt(d.present_f1_at_5)},
                      {"absent_r@5", opt(d.absent_r_at_5)},
                      {"absent_r@10", opt(d.absent_r_at_10)}});
    }
    j["per_document"] = std::move(docs);
  }
  return j.dump(2);
}

std::string report_table(const EvalReport& report) {
  const std::pair<const char*, double> rows[] = {
      {"present F1@3", report.present_f1_at_3},
      {"present F1@5", report.present_f1_at_5},
      {"absent R@5", report.absent_r_at_5},
      {"absent R@10", report.absent_r_at_10},
  };
  std::ostringstream out;
  char buf[96];
  std::snprintf(buf, sizeof(buf), "%-14s %10s\n", "metric", "value");
  out << buf;
  for (const auto& [name, value] : rows) {
    std::snprintf(buf, sizeof(buf), "%-14s %10.4f\n", name, value);
    out << buf;
  }
  std::snprintf(buf, sizeof(buf), "%-14s %10d\n", "documents", report.documents);
  out << buf;
  std::snprintf(buf, sizeof(buf), "%-14s %10d\n", "with present", report.present_documents);
  out << buf;
  std::snprintf(buf, sizeof(buf), "%-14s %10d\n", "with absent", report.absent_documents);
  out << buf;
  return out.str();
}

std::vector<double> default_alpha_grid() {
  std::vector<double> grid;
  for (int i = -4; i <= 4; ++i) grid.push_back(i * 0.25);
  return grid;
}

AlphaSelection select_alpha(std::span<const double> grid,
                            std::span<const std::array<double, 4>> metrics) {
  if (grid.empty()) throw std::invalid_argument("select_alpha: empty grid");
  if (grid.size() != metrics.size()) {
    throw std::invalid_argument("select_alpha: one metric row per alpha required");
  }
  std::array<double, 4> max{};
  for (const auto& row : metrics) {
    for (size_t c = 0; c < 4; ++c) max[c] = std::max(max[c], row[c]);
  }
  AlphaSelection sel;
  sel.grid.assign(grid.begin(), grid.end());
  sel.metrics.assign(metrics.begin(), metrics.end());
  double best = -1.0;
  for (size_t i = 0; i < grid.size(); ++i) {
    double log_sum = 0.0;
    int cols = 0;
    bool zero = false;
    for (size_t c = 0; c < 4; ++c) {
      if (max[c] <= 0.0) continue;
      const double v = metrics[i][c] / max[c];
      ++cols;
      if (v <= 0.0) {
        zero = true;
      } else {
        log_sum += std::log(v);
      }
    }
    const double gm = cols == 0 || zero ? 0.0 : std::exp(log_sum / cols);
    sel.geometric_means.push_back(gm);
    if (gm > best || (gm == best && grid[i] < sel.alpha)) {
      best = gm;
      sel.alpha = grid[i];
    }
  }
  return sel;
}

AlphaSelection select_alpha(const KeyphraseGenerator& generator,
                            std::span<const Document> validation,
                            std::span<const double> grid) {
  if (validation.empty()) throw std::invalid_argument("select_alpha: empty validation set");
  if (grid.empty()) throw std::invalid_argument("select_alpha: empty grid");
  std::vector<std::vector<BeamHypothesis>> beams;
  beams.reserve(validation.size());
  for (const Document& doc : validation) beams.push_back(generator.search(doc));

  std::vector<std::array<double, 4>> metrics;
  for (double alpha : grid) {
    DecodeConfig cfg = generator.decode_config();
    cfg.alpha = alpha;
    std::vector<Prediction> preds;
    for (size_t i = 0; i < validation.size(); ++i) {
      preds.push_back(to_prediction(
          validation[i].id, rerank(beams[i], validation[i], generator.index(), cfg)));
    }
    metrics.push_back(evaluate(validation, preds).metrics());
  }
  return select_alpha(grid, metrics);
}

DatasetStats dataset_stats(std::span<const Document> docs,
                           std::span<const Document> reference_corpus) {
  DatasetStats s;
  s.documents = static_cast<int>(docs.size());
  if (docs.empty()) return s;
  std::unordered_set<std::string> known;
  for (const Document& d : reference_corpus) {
    for (const Phrase& p : d.gold_keyphrases) known.insert(p.stem_key);
    for (const Phrase& p : extract_noun_phrases(d)) known.insert(p.stem_key);
  }
  long total = 0, absent = 0, overlap = 0;
  std::vector<double> per_doc_absent;
  for (const Document& d : docs) {
    const std::vector<Phrase> golds = dedup(d.gold_keyphrases);
    long doc_absent = 0;
    for (const Phrase& g : golds) {
      if (!is_present(g, d)) ++doc_absent;
      if (known.count(g.stem_key)) ++overlap;
    }
    total += static_cast<long>(golds.size());
    absent += doc_absent;
    if (!golds.empty()) {
      per_doc_absent.push_back(100.0 * static_cast<double>(doc_absent) /
                               static_cast<double>(golds.size()));
    }
  }
  s.kps_per_doc = static_cast<double>(total) / static_cast<double>(docs.size());
  s.pct_absent = mean(per_doc_absent);
  if (total > 0) {
    s.pct_absent_pooled = 100.0 * static_cast<double>(absent) / static_cast<double>(total);
  }
  if (!reference_corpus.empty() && total > 0) {
    s.pct_overlap = 100.0 * static_cast<double>(overlap) / static_cast<double>(total);
  }
  return s;
}

std::string stats_json(const DatasetStats& stats) {
  nlohmann::json j;
  j["documents"] = stats.documents;
  j["kps_per_doc"] = stats.kps_per_doc;
  j["pct_absent"] = stats.pct_absent;
  j["pct_absent_pooled"] = stats.pct_absent_pooled;
  j["pct_overlap"] = stats.pct_overlap ? nlohmann::json(*stats.pct_overlap)
                                       : nlohmann::json(nullptr);
  return j.dump(2);
}

}  // namespace kpgen
