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

#include <cmath>
#include <fstream>
#include <random>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "polads/error.hpp"

namespace polads {
namespace {

TokenStream Doc(std::vector<std::string> tokens, std::vector<std::size_t> starts = {}) {
  return {std::move(tokens), std::move(starts)};
}

nlohmann::json Reference() {
  std::ifstream in(std::string(POLADS_TEST_DATA_DIR) + "/tfidf_reference.json");
  return nlohmann::json::parse(in);
}

TEST(NgramTest, OrderAndBoundary) {
  EXPECT_EQ(ExtractNgrams(Doc({"a1", "b1", "c1"}), 2),
            (std::vector<std::string>{"a1", "b1", "c1", "a1 b1", "b1 c1"}));
  EXPECT_EQ(ExtractNgrams(Doc({"a1", "b1", "c1"}, {1}), 2), (std::vector<std::string>{"a1", "b1", "c1", "b1 c1"}));
  EXPECT_EQ(ExtractNgrams(Doc({"a1", "b1"}), 1), (std::vector<std::string>{"a1", "b1"}));
}

TEST(TfIdfTest, HandExample) {
  const std::vector<TokenStream> docs = {Doc({"vote", "trump"}), Doc({"buy", "shoe"})};
  const auto v = TfIdfVectorizer::Fit(docs, {2, 1});
  EXPECT_EQ(v.terms(), (std::vector<std::string>{"buy", "buy shoe", "shoe", "trump", "vote", "vote trump"}));
  EXPECT_NEAR(v.idf()[*v.Column("vote")], std::log(3.0 / 2.0) + 1.0, 1e-15);
  EXPECT_NEAR(v.idf()[*v.Column("vote")], 1.4055, 1e-4);
}

TEST(TfIdfTest, UbiquitousTermIdfIsOne) {
  const std::vector<TokenStream> docs = {Doc({"vote", "x1"}), Doc({"vote", "y1"}), Doc({"vote"})};
  const auto v = TfIdfVectorizer::Fit(docs, {1, 1});
  EXPECT_DOUBLE_EQ(v.idf()[*v.Column("vote")], 1.0);
}

TEST(TfIdfTest, ErrorsOnEmptyInputs) {
  try {
    TfIdfVectorizer::Fit(std::vector<TokenStream>{}, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyCorpus);
  }
  try {
    TfIdfVectorizer::Fit(std::vector<TokenStream>{Doc({"aa"}), Doc({"bb"})}, {2, 2});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyVocabulary);
  }
}

TEST(TfIdfTest, TransformExamples) {
  const std::vector<TokenStream> docs = {Doc({"vote", "trump"}), Doc({"trump", "vote"})};
  const auto v = TfIdfVectorizer::Fit(docs, {1, 1});
  const SparseVector x = v.Transform(Doc({"vote", "trump"}));
  ASSERT_EQ(x.nnz(), 2u);
  EXPECT_NEAR(x.values()[0], std::sqrt(0.5), 1e-12);
  EXPECT_NEAR(x.values()[1], std::sqrt(0.5), 1e-12);
  EXPECT_EQ(v.Transform(Doc({"other"})).nnz(), 0u);

  const auto single = TfIdfVectorizer::Fit(std::vector<TokenStream>{Doc({"vote"})}, {1, 1});
  const SparseVector y = single.Transform(Doc({"vote", "vote"}));
  ASSERT_EQ(y.nnz(), 1u);
  EXPECT_DOUBLE_EQ(y.values()[0], 1.0);
}

TokenStream FromJson(const nlohmann::json& tokens) { return Doc(tokens.get<std::vector<std::string>>()); }

TEST(TfIdfTest, MatchesScikitLearnReference) {
  const auto ref = Reference();
  for (const auto& c : ref["tfidf"]) {
    std::vector<TokenStream> train;
    for (const auto& d : c["train"]) train.push_back(FromJson(d));
    const auto v = TfIdfVectorizer::Fit(train, {c["ngram_max"].get<int>(), c["min_df"].get<std::size_t>()});
    ASSERT_EQ(v.terms(), c["terms"].get<std::vector<std::string>>());
    const auto idf = c["idf"].get<std::vector<double>>();
    for (std::size_t i = 0; i < idf.size(); ++i) EXPECT_NEAR(v.idf()[i], idf[i], 1e-12);
    for (const char* split : {"train", "test"}) {
      const auto& docs = c[split];
      const auto& rows = c[std::string(split) + "_rows"];
      for (std::size_t r = 0; r < docs.size(); ++r) {
        const SparseVector x = v.Transform(FromJson(docs[r]));
        ASSERT_EQ(x.nnz(), rows[r].size());
        for (std::size_t k = 0; k < x.nnz(); ++k) {
          EXPECT_EQ(x.indices()[k], rows[r][k][0].get<ColumnId>());
          EXPECT_NEAR(x.values()[k], rows[r][k][1].get<double>(), 1e-12);
        }
      }
    }
  }
}

std::vector<TokenStream> RandomDocs(std::mt19937& gen, int n) {
  std::vector<TokenStream> docs;
  for (int i = 0; i < n; ++i) {
    TokenStream d;
    const int len = 1 + static_cast<int>(gen() % 8);
    for (int j = 0; j < len; ++j) d.tokens.push_back("t" + std::to_string(gen() % 12));
    if (len > 2 && gen() % 2) d.segment_starts.push_back(1 + gen() % (len - 1));
    docs.push_back(std::move(d));
  }
  return docs;
}

TEST(TfIdfTest, PropertyNormIdfAndOrderInvariance) {
  std::mt19937 gen(17);
  for (int trial = 0; trial < 30; ++trial) {
    const auto docs = RandomDocs(gen, 25);
    const auto v = TfIdfVectorizer::Fit(docs, {2, 1});
    for (double w : v.idf()) EXPECT_GE(w, 1.0);
    for (const auto& d : RandomDocs(gen, 10)) {
      const double norm = v.Transform(d).L2Norm();
      EXPECT_TRUE(norm == 0.0 || std::abs(norm - 1.0) < 1e-12) << norm;
    }
    // Unigram-only vectors do not depend on token order.
    const auto u = TfIdfVectorizer::Fit(docs, {1, 1});
    TokenStream d = docs[0];
    TokenStream r = d;
    std::reverse(r.tokens.begin(), r.tokens.end());
    r.segment_starts.clear();
    EXPECT_EQ(u.Transform(d), u.Transform(r));
    // Duplicating the corpus keeps the idf ordering.
    std::vector<TokenStream> twice = docs;
    twice.insert(twice.end(), docs.begin(), docs.end());
    const auto w = TfIdfVectorizer::Fit(twice, {2, 1});
    ASSERT_EQ(w.terms(), v.terms());
    for (std::size_t i = 0; i < v.dim(); ++i) {
      for (std::size_t j = 0; j < v.dim(); ++j) {
        EXPECT_EQ(v.idf()[i] < v.idf()[j], w.idf()[i] < w.idf()[j]);
      }
    }
  }
}

TEST(TfIdfTest, JsonRoundTrip) {
  std::mt19937 gen(2);
  const auto v = TfIdfVectorizer::Fit(RandomDocs(gen, 30), {2, 2});
  const auto back = TfIdfVectorizer::FromJson(v.ToJson());
  EXPECT_EQ(back, v);
  EXPECT_EQ(back.ToJson(), v.ToJson());
  for (const auto& d : RandomDocs(gen, 10)) EXPECT_EQ(back.Transform(d), v.Transform(d));
}

}  // namespace
}  // namespace polads
