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

#ifndef KPGEN_POS_TAGGER_H_
#define KPGEN_POS_TAGGER_H_

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace kpgen {

// Tag assigned to the sequence markers [BOS], [EOS], [BOR], [EOR], [SEP].
inline constexpr std::string_view kSpecialTag = "SPECIAL";

// True for the bracketed marker tokens used in augmented model inputs.
bool is_marker_token(std::string_view token);

// Penn Treebank noun / adjective predicates used by the chunk grammar.
bool is_noun_tag(std::string_view tag);
bool is_adjective_tag(std::string_view tag);

class PosTagger {
 public:
  virtual ~PosTagger() = default;

  // Returns exactly one tag per token.
  virtual std::vector<std::string> tag(
      std::span<const std::string> tokens) const = 0;
};

// Most-frequent-tag lexicon tagger with suffix fallbacks. Unknown words that
// match no suffix heuristic are tagged NN.
class LexiconTagger : public PosTagger {
 public:
  LexiconTagger() = default;
  explicit LexiconTagger(std::unordered_map<std::string, std::string> lexicon);

  // Reads a seed file. Two line formats are accepted and may be mixed:
  //   "word TAG"                  a lexicon entry (first tag wins)
  //   "w1/T1 w2/T2 ..."           a tagged sentence; tags are counted and the
  //                               most frequent one per word is kept
  // Blank lines and lines starting with '#' or ';;;' are skipped.
  static LexiconTagger from_file(const std::filesystem::path& path);

  // Location of the bundled lexicon: $KPGEN_DATA_DIR/en-pos-lexicon.txt when
  // the environment variable is set, otherwise the compiled-in data directory.
  static std::filesystem::path default_lexicon_path();

  std::vector<std::string> tag(
      std::span<const std::string> tokens) const override;

  // Tag for a single word out of context.
  std::string tag_word(std::string_view word) const;

  size_t size() const { return lexicon_.size(); }

 private:
  std::unordered_map<std::string, std::string> lexicon_;
};

}  // namespace kpgen

#endif  // KPGEN_POS_TAGGER_H_
