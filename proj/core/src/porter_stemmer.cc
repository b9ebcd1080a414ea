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

#include "kpgen/porter_stemmer.h"

#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

namespace kpgen {
namespace {

using Condition = std::function<bool(const std::string&)>;

struct Rule {
  std::string suffix;  // "*d" matches any double consonant ending
  std::string replacement;
  Condition condition;  // empty means unconditional
};

bool is_vowel(char c) {
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
}

bool is_consonant(const std::string& w, size_t i) {
  if (is_vowel(w[i])) return false;
  if (w[i] != 'y') return true;
  bool negate = false;
  while (i > 0 && w[i] == 'y') {
    negate = !negate;
    --i;
  }
  return !is_vowel(w[i]) != negate;
}

std::vector<bool> consonant_flags(const std::string& w) {
  std::vector<bool> flags(w.size());
  for (size_t i = 0; i < w.size(); ++i) {
    if (is_vowel(w[i])) {
      flags[i] = false;
    } else if (w[i] == 'y') {
      flags[i] = i == 0 ? true : !flags[i - 1];
    } else {
      flags[i] = true;
    }
  }
  return flags;
}

// Number of vowel->consonant transitions, i.e. m in [C](VC)^m[V].
int measure(const std::string& stem) {
  const auto flags = consonant_flags(stem);
  int m = 0;
  for (size_t i = 1; i < flags.size(); ++i) {
    if (!flags[i - 1] && flags[i]) ++m;
  }
  return m;
}

bool positive_measure(const std::string& stem) { return measure(stem) > 0; }

bool contains_vowel(const std::string& stem) {
  for (bool consonant : consonant_flags(stem)) {
    if (!consonant) return true;
  }
  return false;
}

bool ends_double_consonant(const std::string& w) {
  return w.size() >= 2 && w[w.size() - 1] == w[w.size() - 2] &&
         is_consonant(w, w.size() - 1);
}

bool ends_cvc(const std::string& w) {
  const size_t n = w.size();
  if (n >= 3 && is_consonant(w, n - 3) && !is_consonant(w, n - 2) &&
      is_consonant(w, n - 1) && w[n - 1] != 'w' && w[n - 1] != 'x' &&
      w[n - 1] != 'y') {
    return true;
  }
  return n == 2 && !is_consonant(w, 0) && is_consonant(w, 1);
}

bool ends_with(const std::string& w, const std::string& suffix) {
  return w.size() >= suffix.size() &&
         w.compare(w.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::string drop(const std::string& w, size_t count) {
  return w.substr(0, w.size() - count);
}

// The first rule whose suffix matches decides the outcome, whether or not its
// condition holds.
std::string apply_rules(const std::string& word,
                        const std::vector<Rule>& rules) {
  for (const Rule& rule : rules) {
    if (rule.suffix == "*d") {
      if (ends_double_consonant(word)) {
        std::string stem = drop(word, 2);
        if (!rule.condition || rule.condition(stem)) {
          return stem + rule.replacement;
        }
        return word;
      }
      continue;
    }
    if (ends_with(word, rule.suffix)) {
      std::string stem = drop(word, rule.suffix.size());
      if (!rule.condition || rule.condition(stem)) {
        return stem + rule.replacement;
      }
      return word;
    }
  }
  return word;
}

std::string step1a(const std::string& word) {
  if (ends_with(word, "ies") && word.size() == 4) return drop(word, 3) + "ie";
  static const std::vector<Rule> rules = {
      {"sses", "ss", {}}, {"ies", "i", {}}, {"ss", "ss", {}}, {"s", "", {}}};
  return apply_rules(word, rules);
}

std::string step1b(const std::string& word) {
  if (ends_with(word, "ied")) {
    return word.size() == 4 ? drop(word, 3) + "ie" : drop(word, 3) + "i";
  }
  if (ends_with(word, "eed")) {
    std::string stem = drop(word, 3);
    return measure(stem) > 0 ? stem + "ee" : word;
  }
  std::string stem;
  bool stripped = false;
  for (const char* suffix : {"ed", "ing"}) {
    if (ends_with(word, suffix)) {
      stem = drop(word, std::char_traits<char>::length(suffix));
      if (contains_vowel(stem)) {
        stripped = true;
        break;
      }
    }
  }
  if (!stripped) return word;
  const char last = stem.back();
  const std::vector<Rule> rules = {
      {"at", "ate", {}},
      {"bl", "ble", {}},
      {"iz", "ize", {}},
      {"*d", std::string(1, last),
       [last](const std::string&) {
         return last != 'l' && last != 's' && last != 'z';
       }},
      {"", "e",
       [](const std::string& s) { return measure(s) == 1 && ends_cvc(s); }},
  };
  return apply_rules(stem, rules);
}

std::string step1c(const std::string& word) {
  static const std::vector<Rule> rules = {
      {"y", "i", [](const std::string& stem) {
         return stem.size() > 1 && is_consonant(stem, stem.size() - 1);
       }}};
  return apply_rules(word, rules);
}

std::string step2(const std::string& word) {
  if (ends_with(word, "alli") && positive_measure(drop(word, 4))) {
    return step2(drop(word, 4) + "al");
  }
  const Condition m = positive_measure;
  const std::vector<Rule> rules = {
      {"ational", "ate", m}, {"tional", "tion", m}, {"enci", "ence", m},
      {"anci", "ance", m},   {"izer", "ize", m},    {"bli", "ble", m},
      {"alli", "al", m},     {"entli", "ent", m},   {"eli", "e", m},
      {"ousli", "ous", m},   {"ization", "ize", m}, {"ation", "ate", m},
      {"ator", "ate", m},    {"alism", "al", m},    {"iveness", "ive", m},
      {"fulness", "ful", m}, {"ousness", "ous", m}, {"aliti", "al", m},
      {"iviti", "ive", m},   {"biliti", "ble", m},  {"fulli", "ful", m},
      {"logi", "log",
       [&word](const std::string&) {
         return positive_measure(drop(word, 3));
       }},
  };
  return apply_rules(word, rules);
}

std::string step3(const std::string& word) {
  static const Condition m = positive_measure;
  static const std::vector<Rule> rules = {
      {"icate", "ic", m}, {"ative", "", m}, {"alize", "al", m},
      {"iciti", "ic", m}, {"ical", "ic", m}, {"ful", "", m},
      {"ness", "", m}};
  return apply_rules(word, rules);
}

std::string step4(const std::string& word) {
  static const Condition m = [](const std::string& s) {
    return measure(s) > 1;
  };
  static const std::vector<Rule> rules = {
      {"al", "", m},   {"ance", "", m}, {"ence", "", m}, {"er", "", m},
      {"ic", "", m},   {"able", "", m}, {"ible", "", m}, {"ant", "", m},
      {"ement", "", m}, {"ment", "", m}, {"ent", "", m},
      {"ion", "",
       [](const std::string& s) {
         return measure(s) > 1 && (s.back() == 's' || s.back() == 't');
       }},
      {"ou", "", m},   {"ism", "", m},  {"ate", "", m},  {"iti", "", m},
      {"ous", "", m},  {"ive", "", m},  {"ize", "", m}};
  return apply_rules(word, rules);
}

std::string step5a(const std::string& word) {
  if (ends_with(word, "e")) {
    std::string stem = drop(word, 1);
    const int m = measure(stem);
    if (m > 1) return stem;
    if (m == 1 && !ends_cvc(stem)) return stem;
  }
  return word;
}

std::string step5b(const std::string& word) {
  if (ends_with(word, "ll") && measure(drop(word, 1)) > 1) {
    return drop(word, 1);
  }
  return word;
}

const std::unordered_map<std::string, std::string>& irregular_forms() {
  static const std::unordered_map<std::string, std::string> forms = {
      {"sky", "sky"},         {"skies", "sky"},     {"dying", "die"},
      {"lying", "lie"},       {"tying", "tie"},     {"news", "news"},
      {"innings", "inning"},  {"inning", "inning"}, {"outings", "outing"},
      {"outing", "outing"},   {"cannings", "canning"},
      {"canning", "canning"}, {"howe", "howe"},     {"proceed", "proceed"},
      {"exceed", "exceed"},   {"succeed", "succeed"}};
  return forms;
}

}  // namespace

std::string porter_stem(std::string_view word) {
  std::string w(word);
  for (char& c : w) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  if (auto it = irregular_forms().find(w); it != irregular_forms().end()) {
    return it->second;
  }
  if (w.size() <= 2) return w;
  w = step1a(w);
  w = step1b(w);
  w = step1c(w);
  w = step2(w);
  w = step3(w);
  w = step4(w);
  w = step5a(w);
  w = step5b(w);
  return w;
}

}  // namespace kpgen
