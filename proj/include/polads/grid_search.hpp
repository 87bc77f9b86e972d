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
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "polads/corpus.hpp"
#include "polads/gbdt.hpp"
#include "polads/sparse.hpp"

namespace polads {

struct Fold {
  std::vector<std::size_t> train;
  std::vector<std::size_t> validation;
};

// k folds over rows grouped by `groups` (advertiser ids): distinct groups are
// shuffled with `seed` and dealt round-robin, so no group spans two folds.
// Throws Error(kInsufficientGroups) when there are fewer than k groups.
std::vector<Fold> GroupKFold(std::span<const std::string> groups, int k, std::uint64_t seed);

// Axis values of a full-factorial grid around a base parameter set.
struct GridSpec {
  std::vector<int> n_trees{100, 200, 400};
  std::vector<double> learning_rate{0.05, 0.1};
  std::vector<int> max_leaves{15, 31};
  std::vector<int> min_samples_leaf{10, 20};

  std::vector<GbdtParams> Expand(const GbdtParams& base) const;
};

struct GridPointScore {
  GbdtParams params;
  std::vector<double> fold_f1;  // percent
  double mean_f1 = 0.0;
};

struct GridSearchResult {
  GbdtParams best;
  std::vector<GridPointScore> scores;  // grid order
};

// Picks the configuration with the highest mean validation F1 over
// advertiser-grouped folds. Ties go to fewer trees, then the lower learning
// rate, then grid order. Each fold is trained with inverse-frequency weights
// from its own training labels.
GridSearchResult GridSearchCv(const SparseMatrix& x, std::span<const Label> y,
                              std::span<const std::string> groups, std::span<const GbdtParams> grid,
                              int k = 5, std::uint64_t seed = 0);

}  // namespace polads
