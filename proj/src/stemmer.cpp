/*
 * Copyright 2026 The polads Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "polads/stemmer.hpp"

#include <array>
#include <span>
#include <utility>

namespace polads {
namespace {

// Working copy of the word. 'Y' marks a consonantal y.
class Word {
 public:
  explicit Word(std::string_view w) : s_(w) {}

  std::string& str() { return s_; }
  std::size_t size() const { return s_.size(); }

  bool IsVowel(std::size_t i) const {
    switch (s_[i]) {
      case 'a': case 'e': case 'i': case 'o': case 'u': case 'y': return true;
      default: return false;
    }
  }

  bool EndsWith(std::string_view suffix) const {
    return s_.size() >= suffix.size() &&
           std::string_view(s_).substr(s_.size() - suffix.size()) == suffix;
  }

  bool StartsWith(std::string_view prefix) const {
    return std::string_view(s_).substr(0, prefix.size()) == prefix;
  }

  void Replace(std::size_t suffix_len, std::string_view with) {
    s_.resize(s_.size() - suffix_len);
    s_ += with;
  }

  // True when [0, end) contains a vowel.
  bool HasVowelBefore(std::size_t end) const {
    for (std::size_t i = 0; i < end; ++i) {
      if (IsVowel(i)) return true;
    }
    return false;
  }

  // Short syllable ending at position end (exclusive).
  bool EndsInShortSyllable(std::size_t end) const {
    if (end == 2) return IsVowel(0) && !IsVowel(1);
    if (end < 3) return false;
    const char last = s_[end - 1];
    return !IsVowel(end - 3) && IsVowel(end - 2) && !IsVowel(end - 1) && last != 'w' &&
           last != 'x' && last != 'Y';
  }

 private:
  std::string s_;
};

bool IsDouble(std::string_view s) {
  if (s.size() < 2) return false;
  const char a = s[s.size() - 1];
  if (a != s[s.size() - 2]) return false;
  switch (a) {
    case 'b': case 'd': case 'f': case 'g': case 'm': case 'n': case 'p': case 'r': case 't':
      return true;
    default:
      return false;
  }
}

bool IsValidLiEnding(char c) {
  switch (c) {
    case 'c': case 'd': case 'e': case 'g': case 'h': case 'k': case 'm': case 'n': case 'r': case 't':
      return true;
    default:
      return false;
  }
}

// Longest suffix of `w` among `suffixes`, or npos-like -1.
int LongestSuffix(Word& w, std::span<const std::string_view> suffixes) {
  int best = -1;
  std::size_t best_len = 0;
  for (std::size_t i = 0; i < suffixes.size(); ++i) {
    if (suffixes[i].size() > best_len && w.EndsWith(suffixes[i])) {
      best = static_cast<int>(i);
      best_len = suffixes[i].size();
    }
  }
  return best;
}

constexpr std::array<std::pair<std::string_view, std::string_view>, 18> kExceptions1{{
    {"skis", "ski"},     {"skies", "sky"},   {"dying", "die"},   {"lying", "lie"},
    {"tying", "tie"},    {"idly", "idl"},    {"gently", "gentl"}, {"ugly", "ugli"},
    {"early", "earli"},  {"only", "onli"},   {"singly", "singl"}, {"sky", "sky"},
    {"news", "news"},    {"howe", "howe"},   {"atlas", "atlas"}, {"cosmos", "cosmos"},
    {"bias", "bias"},    {"andes", "andes"},
}};

constexpr std::array<std::string_view, 8> kExceptions2{
    "inning", "outing", "canning", "herring", "earring", "proceed", "exceed", "succeed"};

}  // namespace

std::string Porter2Stem(std::string_view input) {
  if (input.size() <= 2) return std::string(input);
  for (const auto& [word, stem] : kExceptions1) {
    if (input == word) return std::string(stem);
  }

  Word w(input);
  std::string& s = w.str();
  if (s[0] == '\'') s.erase(0, 1);
  if (s.empty()) return s;

  bool has_y = false;
  if (s[0] == 'y') {
    s[0] = 'Y';
    has_y = true;
  }
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (s[i] == 'y' && w.IsVowel(i - 1)) {
      s[i] = 'Y';
      has_y = true;
    }
  }

  // R1 and R2 start positions.
  std::size_t r1 = s.size();
  std::size_t r2 = s.size();
  if (w.StartsWith("gener") || w.StartsWith("arsen")) {
    r1 = 5;
  } else if (w.StartsWith("commun")) {
    r1 = 6;
  } else {
    for (std::size_t i = 1; i < s.size(); ++i) {
      if (!w.IsVowel(i) && w.IsVowel(i - 1)) {
        r1 = i + 1;
        break;
      }
    }
  }
  for (std::size_t i = r1 + 1; i < s.size(); ++i) {
    if (!w.IsVowel(i) && w.IsVowel(i - 1)) {
      r2 = i + 1;
      break;
    }
  }
  const auto in_r1 = [&](std::size_t suffix_len) { return s.size() - suffix_len >= r1; };
  const auto in_r2 = [&](std::size_t suffix_len) { return s.size() - suffix_len >= r2; };

  // Step 0.
  {
    static constexpr std::array<std::string_view, 3> kSuffixes{"'s'", "'s", "'"};
    const int k = LongestSuffix(w, kSuffixes);
    if (k >= 0) w.Replace(kSuffixes[k].size(), "");
  }

  // Step 1a.
  {
    static constexpr std::array<std::string_view, 6> kSuffixes{"sses", "ied", "ies", "us", "ss", "s"};
    const int k = LongestSuffix(w, kSuffixes);
    switch (k) {
      case 0:
        w.Replace(4, "ss");
        break;
      case 1:
      case 2:
        w.Replace(3, s.size() > 4 ? "i" : "ie");
        break;
      case 5:
        // Delete if the part before the s holds a vowel that is not directly
        // before it.
        if (s.size() >= 2 && w.HasVowelBefore(s.size() - 2)) w.Replace(1, "");
        break;
      default:
        break;
    }
  }

  for (const auto& word : kExceptions2) {
    if (s == word) return s;
  }

  // Step 1b.
  {
    static constexpr std::array<std::string_view, 6> kSuffixes{"eed", "eedly", "ed", "edly", "ing", "ingly"};
    const int k = LongestSuffix(w, kSuffixes);
    if (k == 0 || k == 1) {
      if (in_r1(kSuffixes[k].size())) w.Replace(kSuffixes[k].size(), "ee");
    } else if (k >= 2) {
      const std::size_t len = kSuffixes[k].size();
      if (w.HasVowelBefore(s.size() - len)) {
        w.Replace(len, "");
        if (w.EndsWith("at") || w.EndsWith("bl") || w.EndsWith("iz")) {
          s += 'e';
        } else if (IsDouble(s)) {
          s.pop_back();
        } else if (r1 >= s.size() && w.EndsInShortSyllable(s.size())) {
          s += 'e';
        }
      }
    }
  }

  // Step 1c.
  if (s.size() > 2 && (s.back() == 'y' || s.back() == 'Y') && !w.IsVowel(s.size() - 2)) {
    s.back() = 'i';
  }

  // Step 2.
  {
    static constexpr std::array<std::pair<std::string_view, std::string_view>, 24> kRules{{
        {"tional", "tion"}, {"enci", "ence"},  {"anci", "ance"},    {"abli", "able"},
        {"entli", "ent"},   {"izer", "ize"},   {"ization", "ize"},  {"ational", "ate"},
        {"ation", "ate"},   {"ator", "ate"},   {"alism", "al"},     {"aliti", "al"},
        {"alli", "al"},     {"fulness", "ful"}, {"ousli", "ous"},   {"ousness", "ous"},
        {"iveness", "ive"}, {"iviti", "ive"},  {"biliti", "ble"},   {"bli", "ble"},
        {"ogi", "og"},      {"fulli", "ful"},  {"lessli", "less"},  {"li", ""},
    }};
    std::array<std::string_view, kRules.size()> suffixes;
    for (std::size_t i = 0; i < kRules.size(); ++i) suffixes[i] = kRules[i].first;
    const int k = LongestSuffix(w, suffixes);
    if (k >= 0) {
      const auto& [suffix, replacement] = kRules[k];
      if (in_r1(suffix.size())) {
        if (suffix == "ogi") {
          if (s.size() > 3 && s[s.size() - 4] == 'l') w.Replace(3, "og");
        } else if (suffix == "li") {
          if (s.size() > 2 && IsValidLiEnding(s[s.size() - 3])) w.Replace(2, "");
        } else {
          w.Replace(suffix.size(), replacement);
        }
      }
    }
  }

  // Step 3.
  {
    static constexpr std::array<std::pair<std::string_view, std::string_view>, 9> kRules{{
        {"tional", "tion"}, {"ational", "ate"}, {"alize", "al"}, {"icate", "ic"}, {"iciti", "ic"},
        {"ical", "ic"},     {"ful", ""},        {"ness", ""},    {"ative", ""},
    }};
    std::array<std::string_view, kRules.size()> suffixes;
    for (std::size_t i = 0; i < kRules.size(); ++i) suffixes[i] = kRules[i].first;
    const int k = LongestSuffix(w, suffixes);
    if (k >= 0) {
      const auto& [suffix, replacement] = kRules[k];
      if (in_r1(suffix.size()) && (suffix != "ative" || in_r2(suffix.size()))) {
        w.Replace(suffix.size(), replacement);
      }
    }
  }

  // Step 4.
  {
    static constexpr std::array<std::string_view, 18> kSuffixes{
        "al",  "ance", "ence", "er",  "ic",  "able", "ible", "ant", "ement",
        "ment", "ent", "ism",  "ate", "iti", "ous",  "ive",  "ize", "ion"};
    const int k = LongestSuffix(w, kSuffixes);
    if (k >= 0) {
      const std::size_t len = kSuffixes[k].size();
      if (in_r2(len)) {
        if (kSuffixes[k] == "ion") {
          const char before = s.size() > 3 ? s[s.size() - 4] : '\0';
          if (before == 's' || before == 't') w.Replace(3, "");
        } else {
          w.Replace(len, "");
        }
      }
    }
  }

  // Step 5.
  if (w.EndsWith("e")) {
    if (in_r2(1) || (in_r1(1) && !w.EndsInShortSyllable(s.size() - 1))) w.Replace(1, "");
  } else if (w.EndsWith("l")) {
    if (in_r2(1) && s.size() >= 2 && s[s.size() - 2] == 'l') w.Replace(1, "");
  }

  if (has_y) {
    for (char& c : s) {
      if (c == 'Y') c = 'y';
    }
  }
  return s;
}

}  // namespace polads
