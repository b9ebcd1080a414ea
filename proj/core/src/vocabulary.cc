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

#include "kpgen/vocabulary.h"

#include <algorithm>

#include "kpgen/pos_tagger.h"

namespace kpgen {

Vocabulary::Vocabulary() {
  for (std::string_view s : {kPad, kUnk, kBos, kEos, kBor, kEor, kSep}) {
    add(std::string(s));
  }
}

Vocabulary::Vocabulary(std::span<const std::string> words) : Vocabulary() {
  for (const std::string& w : words) add(w);
}

Vocabulary Vocabulary::from_counts(
    const std::unordered_map<std::string, long>& counts, int max_size) {
  std::vector<std::pair<std::string, long>> sorted(counts.begin(), counts.end());
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  Vocabulary v;
  for (const auto& [word, count] : sorted) {
    if (v.size() >= max_size) break;
    v.add(word);
  }
  return v;
}

void Vocabulary::add(const std::string& word) {
  if (index_.count(word)) return;
  index_.emplace(word, static_cast<int>(words_.size()));
  words_.push_back(word);
}

int Vocabulary::id(std::string_view word) const {
  auto it = index_.find(std::string(word));
  return it == index_.end() ? kUnkId : it->second;
}

bool Vocabulary::contains(std::string_view word) const {
  return index_.count(std::string(word)) > 0;
}

PosTagSet::PosTagSet() {
  tags_ = {"X",   "SPECIAL", "CC",  "CD",   "DT",  "EX",  "FW",  "IN",
           "JJ",  "JJR",     "JJS", "LS",   "MD",  "NN",  "NNS", "NNP",
           "NNPS", "PDT",    "POS", "PRP",  "PRP$", "RB", "RBR", "RBS",
           "RP",  "SYM",     "TO",  "UH",   "VB",  "VBD", "VBG", "VBN",
           "VBP", "VBZ",     "WDT", "WP",   "WP$", "WRB", ".",   ",",
           ":",   "(",       ")",   "''",   "``",  "$",   "#"};
  for (size_t i = 0; i < tags_.size(); ++i) {
    index_.emplace(tags_[i], static_cast<int>(i));
  }
}

const PosTagSet& PosTagSet::instance() {
  static const PosTagSet set;
  return set;
}

int PosTagSet::id(std::string_view tag) const {
  auto it = index_.find(std::string(tag));
  return it == index_.end() ? 0 : it->second;
}

void PosLexicon::observe(std::string_view word, std::string_view tag) {
  ++counts_[std::string(word)][std::string(tag)];
}

void PosLexicon::finalize() {
  for (const auto& [word, tags] : counts_) {
    const std::string* best = nullptr;
    long best_count = 0;
    for (const auto& [tag, count] : tags) {
      if (count > best_count) {
        best = &tag;
        best_count = count;
      }
    }
    if (best) table_[word] = *best;
  }
  counts_.clear();
}

std::string PosLexicon::tag(std::string_view word) const {
  if (is_marker_token(word)) return std::string(kSpecialTag);
  auto it = table_.find(std::string(word));
  return it == table_.end() ? "NN" : it->second;
}

}  // namespace kpgen
