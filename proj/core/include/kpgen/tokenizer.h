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

#ifndef KPGEN_TOKENIZER_H_
#define KPGEN_TOKENIZER_H_

#include <string>
#include <string_view>
#include <vector>

namespace kpgen {

// Splits UTF-8 text into lowercased word tokens. Runs of letters and digits
// form words; a hyphen between two word characters stays inside the word
// ("author-topic"), as does a period between two digits ("3.5"). Every other
// punctuation character becomes its own token. Bytes >= 0x80 are treated as
// word characters and are not case-folded.
std::vector<std::string> tokenize(std::string_view text);

// Tokenizes title and body and joins them with a "." token. Either part may be
// empty, in which case no separator is inserted.
std::vector<std::string> tokenize_document(std::string_view title,
                                           std::string_view body);

}  // namespace kpgen

#endif  // KPGEN_TOKENIZER_H_
