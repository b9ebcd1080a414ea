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

#include "kpgen/pos_tagger.h"

#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#ifndef KPGEN_DEFAULT_DATA_DIR
#define KPGEN_DEFAULT_DATA_DIR "data"
#endif

namespace kpgen {
namespace {

bool ends_with(std::string_view w, std::string_view suffix) {
  return w.size() > suffix.size() &&
         w.substr(w.size() - suffix.size()) == suffix;
}

std::string punctuation_tag(std::string_view token) {
  if (token == "." || token == "!" || token == "?") return ".";
  if (token == ",") return ",";
  if (token == ":" || token == ";" || token == "-" || token == "--") {
    return ":";
  }
  if (token == "(" || token == "[" || token == "{") return "(";
  if (token == ")" || token == "]" || token == "}") return ")";
  if (token == "\"" || token == "'" || token == "`") return "''";
  if (token == "$") return "$";
  if (token == "#") return "#";
  return "SYM";
}

bool is_number(std::string_view token) {
  bool digit = false;
  for (char c : token) {
    if (c >= '0' && c <= '9') {
      digit = true;
    } else if (c != '.' && c != ',' && c != '-') {
      return false;
    }
  }
  return digit;
}

std::string suffix_tag(std::string_view w) {
  for (std::string_view s : {"ness", "ment", "tion", "sion", "ity", "ism"}) {
    if (ends_with(w, s)) return "NN";
  }
  for (std::string_view s :
       {"ous", "ive", "ful", "able", "ible", "less", "al", "ic"}) {
    if (ends_with(w, s)) return "JJ";
  }
  if (ends_with(w, "ing")) return "VBG";
  if (ends_with(w, "ed")) return "VBN";
  if (ends_with(w, "ly")) return "RB";
  if (ends_with(w, "s") && !ends_with(w, "ss") && !ends_with(w, "us") &&
      !ends_with(w, "is")) {
    return "NNS";
  }
  if (w.find('-') != std::string_view::npos) return "JJ";
  return "NN";
}

}  // namespace

bool is_marker_token(std::string_view token) {
  return token == "[BOS]" || token == "[EOS]" || token == "[BOR]" ||
         token == "[EOR]" || token == "[SEP]";
}

bool is_noun_tag(std::string_view tag) { return tag.substr(0, 2) == "NN"; }

bool is_adjective_tag(std::string_view tag) { return tag == "JJ"; }

LexiconTagger::LexiconTagger(
    std::unordered_map<std::string, std::string> lexicon)
    : lexicon_(std::move(lexicon)) {}

LexiconTagger LexiconTagger::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open POS seed file: " + path.string());
  }
  std::unordered_map<std::string, std::string> lexicon;
  std::unordered_map<std::string, std::map<std::string, int>> counts;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line.rfind(";;;", 0) == 0) continue;
    std::istringstream fields(line);
    std::vector<std::string> parts;
    for (std::string part; fields >> part;) parts.push_back(std::move(part));
    if (parts.empty()) continue;
    const bool sentence = parts[0].find('/') != std::string::npos &&
                          parts[0].size() > 1;
    if (!sentence && parts.size() >= 2) {
      lexicon.emplace(parts[0], parts[1].substr(0, parts[1].find('|')));
      continue;
    }
    for (const std::string& item : parts) {
      const size_t slash = item.rfind('/');
      if (slash == std::string::npos || slash == 0) continue;
      std::string word = item.substr(0, slash);
      for (char& c : word) {
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
      }
      ++counts[word][item.substr(slash + 1)];
    }
  }
  for (const auto& [word, tags] : counts) {
    // Ties resolve to the lexicographically smallest tag (std::map order).
    const std::string* best = nullptr;
    int best_count = 0;
    for (const auto& [tag, count] : tags) {
      if (count > best_count) {
        best = &tag;
        best_count = count;
      }
    }
    lexicon.emplace(word, *best);
  }
  return LexiconTagger(std::move(lexicon));
}

std::filesystem::path LexiconTagger::default_lexicon_path() {
  if (const char* dir = std::getenv("KPGEN_DATA_DIR"); dir && *dir) {
    return std::filesystem::path(dir) / "en-pos-lexicon.txt";
  }
  return std::filesystem::path(KPGEN_DEFAULT_DATA_DIR) / "en-pos-lexicon.txt";
}

std::string LexiconTagger::tag_word(std::string_view word) const {
  if (word.empty()) return "NN";
  if (is_marker_token(word)) return std::string(kSpecialTag);
  if (auto it = lexicon_.find(std::string(word)); it != lexicon_.end()) {
    return it->second;
  }
  if (is_number(word)) return "CD";
  const auto c = static_cast<unsigned char>(word[0]);
  const bool wordlike = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                        (c >= '0' && c <= '9') || c >= 0x80;
  if (!wordlike) return punctuation_tag(word);
  return suffix_tag(word);
}

std::vector<std::string> LexiconTagger::tag(
    std::span<const std::string> tokens) const {
  std::vector<std::string> tags;
  tags.reserve(tokens.size());
  for (const std::string& token : tokens) tags.push_back(tag_word(token));
  return tags;
}

}  // namespace kpgen
