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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "polads/sparse.hpp"
#include "polads/text.hpp"

namespace polads {

struct VectorizerConfig {
  int ngram_max = 2;       // 1 = unigrams only
  std::size_t min_df = 2;  // document-frequency floor

  bool operator==(const VectorizerConfig&) const = default;
};

// n-grams (n = 1..ngram_max) of a token stream, space-joined, never crossing
// a segment start. Order: unigrams then bigrams, each in text order.
std::vector<std::string> ExtractNgrams(const TokenStream& doc, int ngram_max);

// TF-IDF with smoothed idf, raw counts and L2 row normalisation.
//
//   idf(t) = ln((1 + N) / (1 + df(t))) + 1
//
// Columns are the vocabulary terms in lexicographic order.
class TfIdfVectorizer {
 public:
  static constexpr int kSchemaVersion = 1;

  TfIdfVectorizer() = default;

  // Throws Error(kEmptyCorpus) for no documents and Error(kEmptyVocabulary)
  // when nothing reaches min_df.
  static TfIdfVectorizer Fit(std::span<const TokenStream> docs, VectorizerConfig config = {});

  SparseVector Transform(const TokenStream& doc) const;

  std::size_t dim() const { return terms_.size(); }
  const VectorizerConfig& config() const { return config_; }
  const std::vector<std::string>& terms() const { return terms_; }
  const std::vector<double>& idf() const { return idf_; }
  std::optional<ColumnId> Column(const std::string& term) const;

  std::string ToJson() const;
  static TfIdfVectorizer FromJson(std::string_view text);

  bool operator==(const TfIdfVectorizer& other) const {
    return config_ == other.config_ && terms_ == other.terms_ && idf_ == other.idf_;
  }

 private:
  void Index();

  VectorizerConfig config_;
  std::vector<std::string> terms_;
  std::vector<double> idf_;
  std::unordered_map<std::string, ColumnId> index_;
};

}  // namespace polads
