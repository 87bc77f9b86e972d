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

#include "polads/grid_search.hpp"

#include <algorithm>
#include <map>

#include <spdlog/spdlog.h>

#include "polads/error.hpp"
#include "polads/evaluation.hpp"
#include "polads/random.hpp"

namespace polads {

std::vector<Fold> GroupKFold(std::span<const std::string> groups, int k, std::uint64_t seed) {
  if (k < 2) throw Error(ErrorCode::kInvalidArgument, "k-fold needs k >= 2");
  std::map<std::string, std::vector<std::size_t>> members;
  for (std::size_t i = 0; i < groups.size(); ++i) members[groups[i]].push_back(i);
  if (members.size() < static_cast<std::size_t>(k)) {
    throw Error(ErrorCode::kInsufficientGroups, std::to_string(members.size()) + " advertisers cannot fill " +
                                                    std::to_string(k) + " folds");
  }
  std::vector<const std::string*> order;
  for (const auto& [name, rows] : members) order.push_back(&name);
  Rng rng(seed);
  rng.Shuffle(std::span<const std::string*>(order));

  std::vector<int> fold_of_row(groups.size(), 0);
  for (std::size_t g = 0; g < order.size(); ++g) {
    for (std::size_t row : members[*order[g]]) fold_of_row[row] = static_cast<int>(g % static_cast<std::size_t>(k));
  }
  std::vector<Fold> folds(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < groups.size(); ++i) {
    for (int f = 0; f < k; ++f) {
      auto& fold = folds[static_cast<std::size_t>(f)];
      (fold_of_row[i] == f ? fold.validation : fold.train).push_back(i);
    }
  }
  return folds;
}

std::vector<GbdtParams> GridSpec::Expand(const GbdtParams& base) const {
  std::vector<GbdtParams> grid;
  for (int trees : n_trees) {
    for (double lr : learning_rate) {
      for (int leaves : max_leaves) {
        for (int min_leaf : min_samples_leaf) {
          GbdtParams p = base;
          p.n_trees = trees;
          p.learning_rate = lr;
          p.max_leaves = leaves;
          p.min_samples_leaf = min_leaf;
          grid.push_back(p);
        }
      }
    }
  }
  return grid;
}

namespace {

SparseMatrix Rows(const SparseMatrix& x, std::span<const std::size_t> positions) {
  SparseMatrix out;
  out.cols = x.cols;
  out.rows.reserve(positions.size());
  for (auto p : positions) out.rows.push_back(x.rows[p]);
  return out;
}

std::vector<Label> Pick(std::span<const Label> y, std::span<const std::size_t> positions) {
  std::vector<Label> out;
  out.reserve(positions.size());
  for (auto p : positions) out.push_back(y[p]);
  return out;
}

}  // namespace

GridSearchResult GridSearchCv(const SparseMatrix& x, std::span<const Label> y,
                              std::span<const std::string> groups, std::span<const GbdtParams> grid, int k,
                              std::uint64_t seed) {
  if (grid.empty()) throw Error(ErrorCode::kInvalidArgument, "empty hyper-parameter grid");
  if (x.size() != y.size() || groups.size() != y.size()) {
    throw Error(ErrorCode::kLengthMismatch, "features, labels and groups must have equal length");
  }
  const auto folds = GroupKFold(groups, k, seed);

  struct FoldData {
    SparseMatrix x_train, x_val;
    std::vector<Label> y_train, y_val;
    std::vector<double> w_train;
  };
  std::vector<FoldData> data;
  for (const auto& fold : folds) {
    FoldData d{Rows(x, fold.train), Rows(x, fold.validation), Pick(y, fold.train), Pick(y, fold.validation), {}};
    d.w_train = SampleWeights(d.y_train, ComputeClassWeights(d.y_train));
    data.push_back(std::move(d));
  }

  GridSearchResult result;
  for (const auto& params : grid) {
    GridPointScore score{params, {}, 0.0};
    for (const auto& d : data) {
      const GbdtEnsemble model = TrainGbdt(d.x_train, d.y_train, d.w_train, params);
      std::vector<Label> predicted;
      predicted.reserve(d.x_val.size());
      for (const auto& row : d.x_val.rows) {
        predicted.push_back(model.PredictProba(row) >= 0.5 ? Label::kPolitical : Label::kNonPolitical);
      }
      score.fold_f1.push_back(ComputeMetrics(predicted, d.y_val).f1);
    }
    for (double f1 : score.fold_f1) score.mean_f1 += f1;
    score.mean_f1 /= static_cast<double>(score.fold_f1.size());
    spdlog::info("grid n_trees={} lr={} leaves={} min_leaf={}: mean F1 {:.4f} over {} folds", params.n_trees,
                 params.learning_rate, params.max_leaves, params.min_samples_leaf, score.mean_f1,
                 score.fold_f1.size());
    result.scores.push_back(std::move(score));
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i < result.scores.size(); ++i) {
    const auto& cand = result.scores[i];
    const auto& cur = result.scores[best];
    if (cand.mean_f1 != cur.mean_f1) {
      if (cand.mean_f1 > cur.mean_f1) best = i;
    } else if (cand.params.n_trees != cur.params.n_trees) {
      if (cand.params.n_trees < cur.params.n_trees) best = i;
    } else if (cand.params.learning_rate < cur.params.learning_rate) {
      best = i;
    }
  }
  result.best = result.scores[best].params;
  return result;
}

}  // namespace polads
