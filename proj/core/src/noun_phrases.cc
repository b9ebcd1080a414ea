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

#include <stdexcept>
#include <unordered_set>

#include "kpgen/corpus.h"

namespace kpgen {

std::vector<Phrase> extract_noun_phrases(std::span<const std::string> tokens,
                                         std::span<const std::string> tags,
                                         int max_len) {
  if (tokens.size() != tags.size()) {
    throw std::invalid_argument("extract_noun_phrases: tokens/tags mismatch");
  }
  std::vector<Phrase> phrases;
  std::unordered_set<std::string> seen;
  const int n = static_cast<int>(tokens.size());
  for (int start = 0; start < n; ++start) {
    // Longest admissible run of JJ / NN* tags starting here.
    int end = start;
    while (end < n && end - start < max_len &&
           (is_noun_tag(tags[end]) || is_adjective_tag(tags[end]))) {
      ++end;
    }
    for (int last = end - 1; last >= start; --last) {
      if (!is_noun_tag(tags[last])) continue;
      Phrase p = make_phrase(std::vector<std::string>(
          tokens.begin() + start, tokens.begin() + last + 1));
      if (seen.insert(p.stem_key).second) phrases.push_back(std::move(p));
    }
  }
  return phrases;
}

std::vector<Phrase> extract_noun_phrases(const Document& doc, int max_len) {
  return extract_noun_phrases(doc.tokens, doc.tags, max_len);
}

}  // namespace kpgen
