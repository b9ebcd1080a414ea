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

#include "kpgen/retriever.h"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <nlohmann/json.hpp>
#include <numeric>
#include <stdexcept>

#include "kpgen/tokenizer.h"

namespace kpgen {

Vector BankEntry::context_embedding() const {
  Vector c = sum / static_cast<double>(doc_count);
  const double norm = c.norm();
  if (norm > 0) c /= norm;
  return c;
}

PhraseBank::PhraseBank(int dim, int min_df) : dim_(dim), min_df_(min_df) {
  if (dim <= 0) throw std::invalid_argument("phrase bank: dim must be > 0");
  if (min_df < 1) throw std::invalid_argument("phrase bank: min_df must be >= 1");
}

void PhraseBank::add_document(const Document& doc, const Vector& doc_embedding) {
  if (doc_embedding.size() != dim_) {
    throw std::invalid_argument("phrase bank: embedding dim " +
                                std::to_string(doc_embedding.size()) +
                                " != bank dim " + std::to_string(dim_));
  }
  // extract_noun_phrases already deduplicates by stem key, so each phrase is
  // counted once per document.
  for (Phrase& p : extract_noun_phrases(doc)) {
    auto [it, inserted] = entries_.try_emplace(p.stem_key);
    BankEntry& e = it->second;
    if (inserted) {
      e.surface = std::move(p.tokens);
      e.sum = doc_embedding;
    } else {
      e.sum += doc_embedding;
    }
    ++e.doc_count;
  }
}

void PhraseBank::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write bank: " + path.string());
  nlohmann::json header = {{"dim", dim_}, {"min_df", min_df_}, {"version", 1}};
  out << header.dump() << '\n';
  for (const auto& [key, e] : entries_) {
    nlohmann::json row;
    std::string phrase;
    for (const std::string& t : e.surface) {
      if (!phrase.empty()) phrase.push_back(' ');
      phrase += t;
    }
    row["phrase"] = phrase;
    row["count"] = e.doc_count;
    row["sum"] = std::vector<double>(e.sum.data(), e.sum.data() + e.sum.size());
    out << row.dump() << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

PhraseBank PhraseBank::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open bank: " + path.string());
  std::string line;
  int line_no = 0;
  PhraseBank bank;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = path.string() + ":" + std::to_string(line_no);
    try {
      const auto obj = nlohmann::json::parse(line);
      if (!have_header) {
        if (obj.at("version").get<int>() != 1) {
          throw FormatError(where + ": unsupported bank version");
        }
        bank = PhraseBank(obj.at("dim").get<int>(), obj.at("min_df").get<int>());
        have_header = true;
        continue;
      }
      auto tokens = tokenize(obj.at("phrase").get<std::string>());
      if (tokens.empty()) throw FormatError(where + ": empty phrase");
      const auto sum = obj.at("sum").get<std::vector<double>>();
      if (static_cast<int>(sum.size()) != bank.dim_) {
        throw FormatError(where + ": sum has wrong dimension");
      }
      const int count = obj.at("count").get<int>();
      if (count < 1) throw FormatError(where + ": count must be >= 1");
      BankEntry e;
      e.sum = Eigen::Map<const Vector>(sum.data(), bank.dim_);
      e.doc_count = count;
      const std::string key = stem_key(tokens);
      e.surface = std::move(tokens);
      if (!bank.entries_.emplace(key, std::move(e)).second) {
        throw FormatError(where + ": duplicate phrase");
      }
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(where + ": " + e.what());
    }
  }
  if (!have_header) throw FormatError(path.string() + ": missing header");
  return bank;
}

PhraseBank build_phrase_bank(std::span<const Document> corpus,
                             const EmbeddingModel& model, int min_df) {
  return update_phrase_bank(PhraseBank(model.dim(), min_df), corpus, model);
}

PhraseBank update_phrase_bank(PhraseBank bank,
                              std::span<const Document> corpus,
                              const EmbeddingModel& model) {
  if (model.dim() != bank.dim()) {
    throw std::invalid_argument("phrase bank dim " + std::to_string(bank.dim()) +
                                " does not match embedding dim " +
                                std::to_string(model.dim()));
  }
  for (const Document& doc : corpus) {
    bank.add_document(doc, model.embed_text(doc.tokens));
  }
  return bank;
}

PhraseIndex::PhraseIndex(const PhraseBank& bank) {
  for (const auto& [key, e] : bank.entries()) {
    if (!bank.retrievable(e)) continue;
    keys_.push_back(key);
    surfaces_.push_back(e.surface);
  }
  contexts_.resize(static_cast<Eigen::Index>(keys_.size()), bank.dim());
  Eigen::Index row = 0;
  for (const auto& [key, e] : bank.entries()) {
    if (!bank.retrievable(e)) continue;
    contexts_.row(row++) = e.context_embedding().transpose();
  }
}

bool PhraseIndex::contains(const std::string& stem_key) const {
  return std::binary_search(keys_.begin(), keys_.end(), stem_key);
}

Vector PhraseIndex::scores(const Vector& query) const {
  if (keys_.empty()) return Vector();
  if (query.size() != contexts_.cols()) {
    throw std::invalid_argument("query dim does not match index dim");
  }
  // Context rows are unit length (or zero), so cosine reduces to a dot
  // product once the query is normalized.
  const double norm = query.norm();
  if (norm == 0) return Vector::Zero(contexts_.rows());
  return contexts_ * (query / norm);
}

std::vector<Reference> retrieve(const PhraseIndex& index, const Document& doc,
                                const EmbeddingModel& model,
                                const RetrievalConfig& config) {
  std::vector<Reference> out;
  if (config.k <= 0 || index.size() == 0) return out;
  const Vector scores = index.scores(model.embed_text(doc.tokens));
  std::vector<size_t> candidates;
  for (size_t i = 0; i < index.size(); ++i) {
    if (scores[static_cast<Eigen::Index>(i)] >= config.tau) {
      candidates.push_back(i);
    }
  }
  std::sort(candidates.begin(), candidates.end(), [&](size_t a, size_t b) {
    const double sa = scores[static_cast<Eigen::Index>(a)];
    const double sb = scores[static_cast<Eigen::Index>(b)];
    if (sa != sb) return sa > sb;
    return index.key(a) < index.key(b);
  });
  for (size_t i : candidates) {
    if (static_cast<int>(out.size()) == config.k) break;
    Reference ref;
    ref.phrase.tokens = index.surface(i);
    ref.phrase.stem_key = index.key(i);
    if (config.exclude_present && is_present(ref.phrase, doc)) continue;
    ref.score = scores[static_cast<Eigen::Index>(i)];
    out.push_back(std::move(ref));
  }
  return out;
}

}  // namespace kpgen
