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

#ifndef KPGEN_CORPUS_H_
#define KPGEN_CORPUS_H_

#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "kpgen/pos_tagger.h"

namespace kpgen {

inline constexpr int kMaxPhraseLength = 6;

// Raised for malformed input files. The message names the file and line.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A word sequence together with its stemmed identity. Two phrases denote the
// same keyphrase iff their stem keys are equal.
struct Phrase {
  std::vector<std::string> tokens;
  std::string stem_key;

  std::string text() const;
  friend bool operator==(const Phrase& a, const Phrase& b) {
    return a.stem_key == b.stem_key;
  }
};

// Space-joined Porter stems.
std::string stem_key(std::span<const std::string> tokens);

// Throws std::invalid_argument for an empty token sequence.
Phrase make_phrase(std::vector<std::string> tokens);

// Tokenizes free text into a phrase ("Topic Models" -> {topic, models}).
Phrase phrase_from_text(std::string_view text);

struct Document {
  std::string id;
  std::string title;
  std::string body;
  std::vector<std::string> tokens;
  std::vector<std::string> tags;
  std::vector<std::string> stems;
  std::vector<Phrase> gold_keyphrases;
};

// Builds a document from raw text. When `tags` is non-empty it must align
// with the tokenization of title + body; otherwise `tagger` supplies them.
// Throws std::invalid_argument on misaligned tags or a missing tagger.
Document make_document(std::string id, std::string title, std::string body,
                       const PosTagger* tagger,
                       std::vector<std::string> tags = {},
                       std::vector<Phrase> gold = {});

// Builds a document directly from tokens and tags (already aligned).
Document make_document_from_tokens(std::string id,
                                   std::vector<std::string> tokens,
                                   std::vector<std::string> tags,
                                   std::vector<Phrase> gold = {});

// 1-indexed position of the first token of the first stemmed occurrence of
// `phrase` in `doc`, or nullopt when absent. Throws std::invalid_argument for
// an empty phrase.
std::optional<int> first_occurrence(const Phrase& phrase, const Document& doc);

bool is_present(const Phrase& phrase, const Document& doc);

// All spans matching (JJ|NN.*)*(NN.*) of length <= max_len, maximal and inner
// alike, ordered by start position (longer spans first at equal start) with
// duplicates by stem key removed.
std::vector<Phrase> extract_noun_phrases(std::span<const std::string> tokens,
                                         std::span<const std::string> tags,
                                         int max_len = kMaxPhraseLength);

std::vector<Phrase> extract_noun_phrases(const Document& doc,
                                         int max_len = kMaxPhraseLength);

// Reads a JSON Lines corpus:
//   {"id": str, "title": str, "abstract": str,
//    "keyphrases": [str, ...] (optional), "tags": [str, ...] (optional)}
// Documents without "tags" are tagged with `tagger` (required then).
std::vector<Document> read_corpus(const std::filesystem::path& path,
                                  const PosTagger* tagger);

}  // namespace kpgen

#endif  // KPGEN_CORPUS_H_
