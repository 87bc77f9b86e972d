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

#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "polads/corpus.hpp"

namespace polads {

// Marker placed between title and message; n-grams never span it.
inline constexpr std::string_view kSegmentBoundary = "⊥";

// Removes <...> spans and decodes &amp; &lt; &gt; &quot; &#39;.
std::string StripMarkup(std::string_view text);

// "title ⊥ message", with markup stripped from the message. Either side may be
// empty, in which case the other is returned alone.
std::string BuildText(const AdRecord& record);

class StopList {
 public:
  StopList() = default;
  explicit StopList(std::unordered_set<std::string> words) : words_(std::move(words)) {}

  // The bundled 318-word English list.
  static const StopList& English();
  static std::string_view EnglishText();
  // One word per line; blank lines and surrounding whitespace ignored.
  static StopList FromFile(const std::filesystem::path& path);
  static StopList FromText(std::string_view text);

  bool Contains(std::string_view word) const { return words_.contains(std::string(word)); }
  std::size_t size() const { return words_.size(); }

 private:
  std::unordered_set<std::string> words_;
};

struct TokenStream {
  std::vector<std::string> tokens;
  // Token positions that start a new segment (never 0). No n-gram crosses one.
  std::vector<std::size_t> segment_starts;

  bool operator==(const TokenStream&) const = default;
};

// Lowercases, extracts runs of two or more letters/digits, drops stop words,
// then stems each survivor with Porter2.
TokenStream TokenizeAndStem(std::string_view text, const StopList& stop_words = StopList::English());

}  // namespace polads
