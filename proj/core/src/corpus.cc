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

#include "kpgen/corpus.h"

#include <fstream>
#include <nlohmann/json.hpp>

#include "kpgen/porter_stemmer.h"
#include "kpgen/tokenizer.h"

namespace kpgen {

std::string Phrase::text() const {
  std::string out;
  for (const std::string& t : tokens) {
    if (!out.empty()) out.push_back(' ');
    out += t;
  }
  return out;
}

std::string stem_key(std::span<const std::string> tokens) {
  std::string key;
  for (const std::string& t : tokens) {
    if (!key.empty()) key.push_back(' ');
    key += porter_stem(t);
  }
  return key;
}

Phrase make_phrase(std::vector<std::string> tokens) {
  if (tokens.empty()) throw std::invalid_argument("invalid phrase: empty");
  Phrase p;
  p.stem_key = stem_key(tokens);
  p.tokens = std::move(tokens);
  return p;
}

Phrase phrase_from_text(std::string_view text) {
  return make_phrase(tokenize(text));
}

Document make_document_from_tokens(std::string id,
                                   std::vector<std::string> tokens,
                                   std::vector<std::string> tags,
                                   std::vector<Phrase> gold) {
  if (tokens.size() != tags.size()) {
    throw std::invalid_argument("document " + id + ": " +
                                std::to_string(tags.size()) + " tags for " +
                                std::to_string(tokens.size()) + " tokens");
  }
  Document doc;
  doc.id = std::move(id);
  doc.tokens = std::move(tokens);
  doc.tags = std::move(tags);
  doc.stems.reserve(doc.tokens.size());
  for (const std::string& t : doc.tokens) doc.stems.push_back(porter_stem(t));
  doc.gold_keyphrases = std::move(gold);
  return doc;
}

Document make_document(std::string id, std::string title, std::string body,
                       const PosTagger* tagger, std::vector<std::string> tags,
                       std::vector<Phrase> gold) {
  std::vector<std::string> tokens = tokenize_document(title, body);
  if (tags.empty() && !tokens.empty()) {
    if (tagger == nullptr) {
      throw std::invalid_argument("document " + id +
                                  " has no tags and no tagger was given");
    }
    tags = tagger->tag(tokens);
  }
  Document doc = make_document_from_tokens(std::move(id), std::move(tokens),
                                           std::move(tags), std::move(gold));
  doc.title = std::move(title);
  doc.body = std::move(body);
  return doc;
}

std::optional<int> first_occurrence(const Phrase& phrase,
                                    const Document& doc) {
  if (phrase.tokens.empty()) {
    throw std::invalid_argument("invalid phrase: empty");
  }
  std::vector<std::string> stems;
  stems.reserve(phrase.tokens.size());
  for (const std::string& t : phrase.tokens) stems.push_back(porter_stem(t));
  const size_t n = doc.stems.size();
  const size_t m = stems.size();
  for (size_t i = 0; i + m <= n; ++i) {
    size_t j = 0;
    while (j < m && doc.stems[i + j] == stems[j]) ++j;
    if (j == m) return static_cast<int>(i) + 1;
  }
  return std::nullopt;
}

bool is_present(const Phrase& phrase, const Document& doc) {
  return first_occurrence(phrase, doc).has_value();
}

std::vector<Document> read_corpus(const std::filesystem::path& path,
                                  const PosTagger* tagger) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open corpus file: " + path.string());
  std::vector<Document> docs;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = path.string() + ":" + std::to_string(line_no);
    try {
      const auto obj = nlohmann::json::parse(line);
      if (!obj.is_object()) throw FormatError(where + ": expected an object");
      std::string id;
      if (auto it = obj.find("id"); it != obj.end()) {
        id = it->is_string() ? it->get<std::string>() : it->dump();
      } else {
        id = std::to_string(docs.size());
      }
      const std::string title = obj.value("title", std::string());
      const std::string body = obj.value("abstract", std::string());
      std::vector<std::string> tags;
      if (auto it = obj.find("tags"); it != obj.end()) {
        tags = it->get<std::vector<std::string>>();
      }
      std::vector<Phrase> gold;
      if (auto it = obj.find("keyphrases"); it != obj.end()) {
        for (const auto& kp : *it) {
          auto tokens = tokenize(kp.get<std::string>());
          if (!tokens.empty()) gold.push_back(make_phrase(std::move(tokens)));
        }
      }
      docs.push_back(make_document(std::move(id), title, body, tagger,
                                   std::move(tags), std::move(gold)));
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(where + ": " + e.what());
    } catch (const std::invalid_argument& e) {
      throw FormatError(where + ": " + e.what());
    }
  }
  return docs;
}

}  // namespace kpgen
