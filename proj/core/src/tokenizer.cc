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

#include "kpgen/tokenizer.h"

namespace kpgen {
namespace {

bool is_word_byte(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9') || c >= 0x80;
}

bool is_digit(unsigned char c) { return c >= '0' && c <= '9'; }

bool is_space(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

char fold(unsigned char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a')
                                : static_cast<char>(c);
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  const size_t n = text.size();
  size_t i = 0;
  while (i < n) {
    const auto c = static_cast<unsigned char>(text[i]);
    if (is_space(c)) {
      ++i;
      continue;
    }
    if (!is_word_byte(c)) {
      tokens.emplace_back(1, text[i]);
      ++i;
      continue;
    }
    std::string word;
    while (i < n) {
      const auto cur = static_cast<unsigned char>(text[i]);
      if (is_word_byte(cur)) {
        word.push_back(fold(cur));
        ++i;
        continue;
      }
      if (i + 1 < n && !word.empty()) {
        const auto next = static_cast<unsigned char>(text[i + 1]);
        if (cur == '-' && is_word_byte(next)) {
          word.push_back('-');
          ++i;
          continue;
        }
        if (cur == '.' && is_digit(next) &&
            is_digit(static_cast<unsigned char>(word.back()))) {
          word.push_back('.');
          ++i;
          continue;
        }
      }
      break;
    }
    tokens.push_back(std::move(word));
  }
  return tokens;
}

std::vector<std::string> tokenize_document(std::string_view title,
                                           std::string_view body) {
  std::vector<std::string> tokens = tokenize(title);
  std::vector<std::string> rest = tokenize(body);
  if (!tokens.empty() && !rest.empty() && tokens.back() != ".") {
    tokens.emplace_back(".");
  }
  tokens.insert(tokens.end(), std::make_move_iterator(rest.begin()),
                std::make_move_iterator(rest.end()));
  return tokens;
}

}  // namespace kpgen
