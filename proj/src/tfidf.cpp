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

#include "polads/tfidf.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "polads/error.hpp"

namespace polads {

std::vector<std::string> ExtractNgrams(const TokenStream& doc, int ngram_max) {
  std::vector<std::string> grams;
  const auto& tokens = doc.tokens;
  grams.reserve(tokens.size() * static_cast<std::size_t>(std::max(ngram_max, 1)));
  grams.insert(grams.end(), tokens.begin(), tokens.end());
  for (int n = 2; n <= ngram_max; ++n) {
    const auto width = static_cast<std::size_t>(n);
    for (std::size_t i = 0; i + width <= tokens.size(); ++i) {
      // Skip windows that contain a segment start after their first token.
      const bool crosses = std::any_of(doc.segment_starts.begin(), doc.segment_starts.end(),
                                       [&](std::size_t s) { return s > i && s < i + width; });
      if (crosses) continue;
      std::string gram = tokens[i];
      for (std::size_t j = 1; j < width; ++j) {
        gram += ' ';
        gram += tokens[i + j];
      }
      grams.push_back(std::move(gram));
    }
  }
  return grams;
}

TfIdfVectorizer TfIdfVectorizer::Fit(std::span<const TokenStream> docs, VectorizerConfig config) {
  if (docs.empty()) throw Error(ErrorCode::kEmptyCorpus, "no training documents");
  if (config.ngram_max < 1) throw Error(ErrorCode::kInvalidArgument, "ngram_max must be >= 1");

  std::map<std::string, std::size_t> df;
  for (const auto& doc : docs) {
    auto grams = ExtractNgrams(doc, config.ngram_max);
    std::sort(grams.begin(), grams.end());
    grams.erase(std::unique(grams.begin(), grams.end()), grams.end());
    for (auto& g : grams) ++df[std::move(g)];
  }

  TfIdfVectorizer v;
  v.config_ = config;
  const double n = static_cast<double>(docs.size());
  for (const auto& [term, count] : df) {
    if (count < config.min_df) continue;
    v.terms_.push_back(term);
    v.idf_.push_back(std::log((1.0 + n) / (1.0 + static_cast<double>(count))) + 1.0);
  }
  if (v.terms_.empty()) {
    throw Error(ErrorCode::kEmptyVocabulary,
                "no n-gram reaches min_df=" + std::to_string(config.min_df));
  }
  v.Index();
  return v;
}

void TfIdfVectorizer::Index() {
  index_.clear();
  index_.reserve(terms_.size());
  for (std::size_t i = 0; i < terms_.size(); ++i) index_.emplace(terms_[i], static_cast<ColumnId>(i));
}

std::optional<ColumnId> TfIdfVectorizer::Column(const std::string& term) const {
  const auto it = index_.find(term);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

SparseVector TfIdfVectorizer::Transform(const TokenStream& doc) const {
  std::vector<std::pair<ColumnId, double>> counts;
  for (const auto& gram : ExtractNgrams(doc, config_.ngram_max)) {
    if (const auto it = index_.find(gram); it != index_.end()) counts.emplace_back(it->second, 1.0);
  }
  SparseVector row = SparseVector::FromPairs(dim(), std::move(counts));
  std::vector<std::pair<ColumnId, double>> weighted;
  weighted.reserve(row.nnz());
  for (std::size_t i = 0; i < row.nnz(); ++i) {
    weighted.emplace_back(row.indices()[i], row.values()[i] * idf_[row.indices()[i]]);
  }
  SparseVector out = SparseVector::FromPairs(dim(), std::move(weighted));
  const double norm = out.L2Norm();
  if (norm > 0.0) out.Scale(1.0 / norm);
  return out;
}

std::string TfIdfVectorizer::ToJson() const {
  nlohmann::json doc = {{"schema_version", kSchemaVersion},
                        {"type", "tfidf_vectorizer"},
                        {"config", {{"ngram_max", config_.ngram_max}, {"min_df", config_.min_df}}},
                        {"vocabulary", terms_},
                        {"idf", idf_}};
  return doc.dump(1);
}

TfIdfVectorizer TfIdfVectorizer::FromJson(std::string_view text) {
  try {
    const auto doc = nlohmann::json::parse(text);
    if (doc.at("type") != "tfidf_vectorizer") throw Error(ErrorCode::kBadConfig, "not a vectorizer");
    if (doc.at("schema_version").get<int>() > kSchemaVersion) {
      throw Error(ErrorCode::kBadConfig, "unsupported vectorizer schema version");
    }
    TfIdfVectorizer v;
    v.config_.ngram_max = doc.at("config").at("ngram_max");
    v.config_.min_df = doc.at("config").at("min_df");
    v.terms_ = doc.at("vocabulary").get<std::vector<std::string>>();
    v.idf_ = doc.at("idf").get<std::vector<double>>();
    if (v.terms_.size() != v.idf_.size()) throw Error(ErrorCode::kBadConfig, "vocabulary/idf size mismatch");
    v.Index();
    return v;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kBadConfig, std::string("vectorizer: ") + e.what());
  }
}

}  // namespace polads
