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

#ifndef KPGEN_RETRIEVER_H_
#define KPGEN_RETRIEVER_H_

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "kpgen/corpus.h"
#include "kpgen/embedding.h"

namespace kpgen {

// One noun phrase of the bank. The context embedding is the normalized mean
// of the embeddings of the documents containing the phrase.
struct BankEntry {
  std::vector<std::string> surface;  // first-seen token sequence
  Vector sum;
  int doc_count = 0;

  Vector context_embedding() const;
};

class PhraseBank {
 public:
  PhraseBank() = default;
  PhraseBank(int dim, int min_df);

  int dim() const { return dim_; }
  int min_df() const { return min_df_; }
  size_t size() const { return entries_.size(); }

  // Keyed by stem key; iteration order is deterministic.
  const std::map<std::string, BankEntry>& entries() const { return entries_; }

  bool retrievable(const BankEntry& entry) const {
    return entry.doc_count >= min_df_;
  }

  // Adds every distinct noun phrase of `doc` once, with `doc_embedding`.
  void add_document(const Document& doc, const Vector& doc_embedding);

  // JSON Lines: a header {"dim", "min_df", "version": 1} then one
  // {"phrase", "count", "sum"} object per entry.
  void save(const std::filesystem::path& path) const;
  static PhraseBank load(const std::filesystem::path& path);

 private:
  int dim_ = 0;
  int min_df_ = 1;
  std::map<std::string, BankEntry> entries_;
};

// Throws std::invalid_argument when dimensions disagree.
PhraseBank build_phrase_bank(std::span<const Document> corpus,
                             const EmbeddingModel& model, int min_df);
PhraseBank update_phrase_bank(PhraseBank bank,
                              std::span<const Document> corpus,
                              const EmbeddingModel& model);

struct RetrievalConfig {
  int k = 15;
  double tau = 0.7;
  // Drop candidates whose stemmed form occurs in the query document.
  bool exclude_present = true;
};

struct Reference {
  Phrase phrase;
  double score = 0;
};

// Sealed view of the retrievable part of a bank: a dense matrix of context
// embeddings scanned exactly for each query. Immutable; safe to share across
// threads.
class PhraseIndex {
 public:
  PhraseIndex() = default;
  explicit PhraseIndex(const PhraseBank& bank);

  size_t size() const { return keys_.size(); }
  int dim() const { return static_cast<int>(contexts_.cols()); }

  // Membership among retrievable entries.
  bool contains(const std::string& stem_key) const;

  // Cosine scores against every retrievable entry, in index order.
  Vector scores(const Vector& query) const;

  const std::string& key(size_t i) const { return keys_[i]; }
  const std::vector<std::string>& surface(size_t i) const {
    return surfaces_[i];
  }

 private:
  std::vector<std::string> keys_;
  std::vector<std::vector<std::string>> surfaces_;
  RowMatrix contexts_;
};

// Top-k retrievable phrases by descending cos(c_z, v_x), keeping scores >= tau
// and (by default) dropping phrases present in `doc`. Ties are broken by stem
// key.
std::vector<Reference> retrieve(const PhraseIndex& index, const Document& doc,
                                const EmbeddingModel& model,
                                const RetrievalConfig& config);

}  // namespace kpgen

#endif  // KPGEN_RETRIEVER_H_
