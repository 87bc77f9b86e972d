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

#include "polads/text.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>

#include "polads/error.hpp"
#include "polads/stemmer.hpp"
#include "strings.hpp"

namespace polads {
namespace internal {
extern const std::string_view kEnglishStopWords;
}  // namespace internal

namespace {

constexpr char32_t kBoundaryCodepoint = 0x22A5;

// Decodes one UTF-8 sequence at `pos`; invalid bytes decode to U+FFFD with
// length 1.
char32_t DecodeUtf8(std::string_view s, std::size_t pos, std::size_t& len) {
  const auto byte = [&](std::size_t i) { return static_cast<unsigned char>(s[i]); };
  const unsigned char c = byte(pos);
  len = 1;
  if (c < 0x80) return c;
  std::size_t need = 0;
  char32_t cp = 0;
  if ((c & 0xE0) == 0xC0) {
    need = 1;
    cp = c & 0x1F;
  } else if ((c & 0xF0) == 0xE0) {
    need = 2;
    cp = c & 0x0F;
  } else if ((c & 0xF8) == 0xF0) {
    need = 3;
    cp = c & 0x07;
  } else {
    return 0xFFFD;
  }
  if (pos + need >= s.size()) return 0xFFFD;
  for (std::size_t i = 1; i <= need; ++i) {
    if ((byte(pos + i) & 0xC0) != 0x80) return 0xFFFD;
    cp = (cp << 6) | (byte(pos + i) & 0x3F);
  }
  len = need + 1;
  return cp;
}

void AppendUtf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

// Letters and digits: ASCII alphanumerics plus the main alphabetic blocks.
bool IsWordCodepoint(char32_t cp) {
  if (cp < 0x80) {
    return (cp >= '0' && cp <= '9') || (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z');
  }
  if (cp == 0xAA || cp == 0xB5 || cp == 0xBA) return true;
  if (cp >= 0xC0 && cp <= 0x24F) return cp != 0xD7 && cp != 0xF7;
  if (cp >= 0x250 && cp <= 0x2AF) return true;
  if (cp >= 0x370 && cp <= 0x1FFF) return cp != 0x37E && cp != 0x387;
  if (cp >= 0x3040 && cp <= 0x30FF) return true;
  if (cp >= 0x3400 && cp <= 0x9FFF) return true;
  if (cp >= 0xAC00 && cp <= 0xD7AF) return true;
  if (cp >= 0xFF10 && cp <= 0xFF19) return true;
  if (cp >= 0xFF21 && cp <= 0xFF3A) return true;
  if (cp >= 0xFF41 && cp <= 0xFF5A) return true;
  return false;
}

char32_t ToLower(char32_t cp) {
  if (cp >= 'A' && cp <= 'Z') return cp - 'A' + 'a';
  if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 0x20;
  return cp;
}

}  // namespace

std::string StripMarkup(std::string_view text) {
  std::string no_tags;
  no_tags.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '<') {
      const auto close = text.find('>', i + 1);
      if (close != std::string_view::npos) {
        // A tag separates words.
        no_tags += ' ';
        i = close;
        continue;
      }
    }
    no_tags += text[i];
  }
  static constexpr std::array<std::pair<std::string_view, std::string_view>, 6> kEntities{{
      {"&amp;", "&"}, {"&lt;", "<"}, {"&gt;", ">"}, {"&quot;", "\""}, {"&#39;", "'"}, {"&apos;", "'"},
  }};
  std::string out;
  out.reserve(no_tags.size());
  for (std::size_t i = 0; i < no_tags.size();) {
    bool decoded = false;
    if (no_tags[i] == '&') {
      for (const auto& [entity, replacement] : kEntities) {
        if (std::string_view(no_tags).substr(i, entity.size()) == entity) {
          out += replacement;
          i += entity.size();
          decoded = true;
          break;
        }
      }
    }
    if (!decoded) out += no_tags[i++];
  }
  // Collapse whitespace runs.
  std::string collapsed;
  collapsed.reserve(out.size());
  bool pending_space = false;
  for (char c : out) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      pending_space = !collapsed.empty();
    } else {
      if (pending_space) collapsed += ' ';
      pending_space = false;
      collapsed += c;
    }
  }
  return collapsed;
}

std::string BuildText(const AdRecord& record) {
  const std::string title(internal::Trim(record.title));
  const std::string message = StripMarkup(record.message);
  if (title.empty()) return message;
  if (message.empty()) return title;
  std::string text = title;
  text += ' ';
  text += kSegmentBoundary;
  text += ' ';
  text += message;
  return text;
}

std::string_view StopList::EnglishText() { return internal::kEnglishStopWords; }

const StopList& StopList::English() {
  static const StopList list = FromText(internal::kEnglishStopWords);
  return list;
}

StopList StopList::FromText(std::string_view text) {
  std::unordered_set<std::string> words;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    const auto word = internal::Trim(line);
    if (!word.empty()) words.insert(internal::ToLowerAscii(word));
  }
  return StopList(std::move(words));
}

StopList StopList::FromFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open stop list " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return FromText(buf.str());
}

TokenStream TokenizeAndStem(std::string_view text, const StopList& stop_words) {
  TokenStream out;
  std::string current;
  std::size_t current_chars = 0;
  bool boundary_pending = false;

  const auto flush = [&] {
    if (current_chars >= 2 && !stop_words.Contains(current)) {
      std::string stem = Porter2Stem(current);
      if (stem.size() >= 2) {
        if (boundary_pending && !out.tokens.empty()) out.segment_starts.push_back(out.tokens.size());
        boundary_pending = false;
        out.tokens.push_back(std::move(stem));
      }
    }
    current.clear();
    current_chars = 0;
  };

  for (std::size_t pos = 0; pos < text.size();) {
    std::size_t len = 1;
    const char32_t cp = DecodeUtf8(text, pos, len);
    pos += len;
    if (IsWordCodepoint(cp)) {
      AppendUtf8(current, ToLower(cp));
      ++current_chars;
      continue;
    }
    flush();
    if (cp == kBoundaryCodepoint) boundary_pending = true;
  }
  flush();
  return out;
}

}  // namespace polads
