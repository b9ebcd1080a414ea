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

#ifndef KPGEN_PORTER_STEMMER_H_
#define KPGEN_PORTER_STEMMER_H_

#include <string>
#include <string_view>

namespace kpgen {

// Porter suffix-stripping stemmer. Follows the variant shipped as the default
// mode of NLTK's PorterStemmer (the original 1980 algorithm plus the NLTK
// extensions: irregular forms, short-word passthrough, the "ied"/"ies"
// special cases, the revised y->i rule and the extra step-2 suffixes), since
// keyphrase benchmarks are conventionally scored with that implementation.
// Input is lowercased first.
std::string porter_stem(std::string_view word);

}  // namespace kpgen

#endif  // KPGEN_PORTER_STEMMER_H_
