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

#include "polads/naive_bayes.hpp"

#include <cmath>
#include <fstream>
#include <random>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "polads/error.hpp"
#include "polads/tfidf.hpp"

namespace polads {
namespace {

SparseMatrix Matrix(std::size_t cols, std::vector<std::vector<std::pair<ColumnId, double>>> rows) {
  SparseMatrix m;
  m.cols = cols;
  for (auto& r : rows) m.rows.push_back(SparseVector::FromPairs(cols, std::move(r)));
  return m;
}

const std::vector<Label> kPN = {Label::kPolitical, Label::kNonPolitical};

// Columns: 0 = "vote", 1 = "shoe".
MnbModel HandModel() { return TrainMnb(Matrix(2, {{{0, 1.0}}, {{1, 1.0}}}), kPN); }

TEST(MnbTest, HandLikelihoods) {
  const MnbModel m = HandModel();
  const int p = static_cast<int>(Label::kPolitical);
  EXPECT_NEAR(std::exp(m.log_likelihood[p][0]), 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(std::exp(m.log_likelihood[p][1]), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(m.log_prior[0], std::log(0.5), 1e-15);
  EXPECT_NEAR(m.log_prior[1], std::log(0.5), 1e-15);
}

TEST(MnbTest, HandPosterior) {
  const MnbModel m = HandModel();
  EXPECT_NEAR(PredictMnb(m, SparseVector::FromPairs(2, {{0, 1.0}})), 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(PredictMnb(m, SparseVector(2)), 0.5, 1e-15);
}

TEST(MnbTest, SmoothingFloorForUnusedFeature) {
  const MnbModel m = TrainMnb(Matrix(3, {{{0, 2.0}}, {{1, 1.0}}}), kPN);
  const int p = static_cast<int>(Label::kPolitical);
  const int n = static_cast<int>(Label::kNonPolitical);
  EXPECT_NEAR(std::exp(m.log_likelihood[p][2]), 1.0 / (2.0 + 3.0), 1e-15);
  EXPECT_NEAR(std::exp(m.log_likelihood[n][2]), 1.0 / (1.0 + 3.0), 1e-15);
}

TEST(MnbTest, EmptyInputReturnsPriors) {
  const MnbModel m = TrainMnb(Matrix(2, {{{0, 1.0}}, {{0, 1.0}}, {{1, 1.0}}}),
                              std::vector<Label>{Label::kPolitical, Label::kPolitical, Label::kNonPolitical});
  EXPECT_NEAR(PredictMnb(m, SparseVector(2)), 2.0 / 3.0, 1e-12);
}

TEST(MnbTest, ScalingMovesPosteriorMonotonically) {
  const MnbModel m = HandModel();
  const double p1 = PredictMnb(m, SparseVector::FromPairs(2, {{0, 1.0}}));
  const double p2 = PredictMnb(m, SparseVector::FromPairs(2, {{0, 2.0}}));
  EXPECT_GT(p1, 0.5);
  EXPECT_GT(p2, p1);
}

TEST(MnbTest, Errors) {
  auto code = [](const std::function<void()>& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kInvalidArgument;
  };
  EXPECT_EQ(code([] { TrainMnb(Matrix(1, {{{0, 1.0}}, {{0, 1.0}}}), std::vector<Label>{Label::kPolitical, Label::kPolitical}); }),
            ErrorCode::kSingleClassTraining);
  EXPECT_EQ(code([] { TrainMnb(Matrix(1, {{{0, -1.0}}, {{0, 1.0}}}), kPN); }), ErrorCode::kNegativeFeature);
  EXPECT_EQ(code([] { TrainMnb(Matrix(1, {{{0, 1.0}}}), kPN); }), ErrorCode::kLengthMismatch);
}

TEST(MnbTest, PropertyDistributionsAndComplement) {
  std::mt19937 gen(23);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t f = 2 + gen() % 10;
    SparseMatrix x;
    x.cols = f;
    std::vector<Label> y;
    for (int i = 0; i < 20; ++i) {
      std::vector<std::pair<ColumnId, double>> row;
      for (ColumnId c = 0; c < f; ++c) {
        if (gen() % 3 == 0) row.emplace_back(c, u(gen));
      }
      x.rows.push_back(SparseVector::FromPairs(f, row));
      y.push_back(i % 2 ? Label::kPolitical : (gen() % 2 ? Label::kPolitical : Label::kNonPolitical));
    }
    y[0] = Label::kNonPolitical;
    const MnbModel m = TrainMnb(x, y, {0.5 + u(gen), false});
    EXPECT_NEAR(std::exp(m.log_prior[0]) + std::exp(m.log_prior[1]), 1.0, 1e-12);
    for (int c = 0; c < 2; ++c) {
      double sum = 0.0;
      for (double l : m.log_likelihood[c]) sum += std::exp(l);
      EXPECT_NEAR(sum, 1.0, 1e-9);
    }
    for (const auto& row : x.rows) {
      const double p = PredictMnb(m, row);
      EXPECT_GE(p, 0.0);
      EXPECT_LE(p, 1.0);
    }
  }
}

TEST(MnbTest, IdenticalLikelihoodFeatureIsNeutral) {
  // Column 2 has the same count share in both classes.
  const MnbModel m = TrainMnb(Matrix(3, {{{0, 2.0}, {2, 1.0}}, {{1, 2.0}, {2, 1.0}}}), kPN);
  const int p = static_cast<int>(Label::kPolitical);
  const int n = static_cast<int>(Label::kNonPolitical);
  ASSERT_NEAR(m.log_likelihood[p][2], m.log_likelihood[n][2], 1e-15);
  const double base = PredictMnb(m, SparseVector::FromPairs(3, {{0, 1.0}}));
  EXPECT_NEAR(PredictMnb(m, SparseVector::FromPairs(3, {{0, 1.0}, {2, 5.0}})), base, 1e-12);
}

TEST(MnbTest, NoUnderflowOnLongDocuments) {
  const MnbModel m = HandModel();
  const double p = PredictMnb(m, SparseVector::FromPairs(2, {{0, 1e4}, {1, 9.9e3}}));
  EXPECT_TRUE(std::isfinite(p));
  EXPECT_GT(p, 0.5);
  EXPECT_TRUE(std::isfinite(PredictMnb(m, SparseVector::FromPairs(2, {{1, 1e4}}))));
}

TEST(MnbTest, MatchesScikitLearnReference) {
  std::ifstream in(std::string(POLADS_TEST_DATA_DIR) + "/tfidf_reference.json");
  const auto ref = nlohmann::json::parse(in)["naive_bayes"];
  std::vector<TokenStream> train;
  for (const auto& d : ref["train"]) train.push_back({d.get<std::vector<std::string>>(), {}});
  const auto v = TfIdfVectorizer::Fit(train, {1, 1});
  SparseMatrix x;
  x.cols = v.dim();
  for (const auto& d : train) x.rows.push_back(v.Transform(d));
  std::vector<Label> y;
  for (int l : ref["labels"]) y.push_back(l ? Label::kPolitical : Label::kNonPolitical);
  for (const auto& c : ref["mnb"]) {
    const MnbModel m = TrainMnb(x, y, {c["alpha"].get<double>(), c["reweight_priors"].get<bool>()});
    const auto expected = c["p_political"].get<std::vector<double>>();
    for (std::size_t i = 0; i < expected.size(); ++i) {
      const TokenStream doc{ref["test"][i].get<std::vector<std::string>>(), {}};
      EXPECT_NEAR(PredictMnb(m, v.Transform(doc)), expected[i], 1e-12);
    }
  }
}

TEST(MnbTest, JsonRoundTrip) {
  const MnbModel m = HandModel();
  EXPECT_EQ(MnbModel::FromJson(m.ToJson()), m);
}

}  // namespace
}  // namespace polads
