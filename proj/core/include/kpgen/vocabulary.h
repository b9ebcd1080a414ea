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

#ifndef KPGEN_VOCABULARY_H_
#define KPGEN_VOCABULARY_H_

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace kpgen {

// Reserved ids shared by every vocabulary.
enum SpecialId : int {
  kPadId = 0,
  kUnkId = 1,
  kBosId = 2,
  kEosId = 3,
  kBorId = 4,
  kEorId = 5,
  kSepId = 6,
  kNumSpecial = 7,
};

inline constexpr std::string_view kPad = "[PAD]";
inline constexpr std::string_view kUnk = "[UNK]";
inline constexpr std::string_view kBos = "[BOS]";
inline constexpr std::string_view kEos = "[EOS]";
inline constexpr std::string_view kBor = "[BOR]";
inline constexpr std::string_view kEor = "[EOR]";
inline constexpr std::string_view kSep = "[SEP]";

class Vocabulary {
 public:
  // Specials only.
  Vocabulary();
  // Specials followed by `words` in the given order (duplicates ignored).
  explicit Vocabulary(std::span<const std::string> words);

  // Specials plus the most frequent words, up to `max_size` entries in total.
  // Frequency ties are broken lexicographically.
  static Vocabulary from_counts(const std::unordered_map<std::string, long>& counts,
                                int max_size);

  int size() const { return static_cast<int>(words_.size()); }
  // kUnkId for unknown words.
  int id(std::string_view word) const;
  bool contains(std::string_view word) const;
  const std::string& word(int id) const { return words_[id]; }
  const std::vector<std::string>& words() const { return words_; }

 private:
  void add(const std::string& word);

  std::vector<std::string> words_;
  std::unordered_map<std::string, int> index_;
};

// Fixed POS tag inventory (Penn Treebank plus SPECIAL); unknown tags map to
// the catch-all "X".
class PosTagSet {
 public:
  static const PosTagSet& instance();

  int size() const { return static_cast<int>(tags_.size()); }
  int id(std::string_view tag) const;
  const std::string& tag(int id) const { return tags_[id]; }

 private:
  PosTagSet();
  std::vector<std::string> tags_;
  std::unordered_map<std::string, int> index_;
};

// Word -> most frequent tag, built from tagged documents. Used to tag words
// the decoder generates and retrieved reference tokens.
class PosLexicon {
 public:
  void observe(std::string_view word, std::string_view tag);
  // Freezes counts into the most-frequent-tag table (ties: smallest tag).
  void finalize();
  // NN for unseen words; SPECIAL for markers.
  std::string tag(std::string_view word) const;

  const std::map<std::string, std::string>& entries() const { return table_; }
  void set(std::string word, std::string tag) {
    table_[std::move(word)] = std::move(tag);
  }

 private:
  std::unordered_map<std::string, std::map<std::string, long>> counts_;
  std::map<std::string, std::string> table_;
};

}  // namespace kpgen

#endif  // KPGEN_VOCABULARY_H_
