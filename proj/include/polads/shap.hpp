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
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "polads/gbdt.hpp"
#include "polads/sparse.hpp"

namespace polads {

// Exact path-dependent Shapley values of one tree's raw output, accumulated
// into `phi` (length = number of features) with weight `scale`. `x` is a dense
// feature row. Throws Error(kMissingCover) when an internal node lacks a
// positive cover.
void TreeShap(const Tree& tree, std::span<const double> x, std::span<double> phi, double scale = 1.0);

// Cover-weighted expectation of the tree output (the TreeSHAP base value).
double TreeExpectedValue(const Tree& tree);

// Attributions on the margin (log-odds) scale. Rows are samples; entries are
// per-feature attributions with zeros omitted.
struct ShapMatrix {
  std::vector<SparseVector> values;
  double base_value = 0.0;
  std::vector<std::string> feature_names;

  std::size_t samples() const { return values.size(); }
};

ShapMatrix EnsembleShap(const GbdtEnsemble& model, const SparseMatrix& x, int threads = 1);

struct ImportanceRanking {
  // (feature name, mean |SHAP|), highest first; ties by column order.
  std::vector<std::pair<std::string, double>> entries;
  std::vector<ColumnId> columns;
};

// Mean absolute attribution per column over the columns in [first, last),
// top_k rows kept (0 = all). Columns with zero attribution are left out.
// Throws Error(kEmptyMatrix) when the matrix has no samples.
ImportanceRanking GlobalImportance(const ShapMatrix& shap, std::size_t top_k, ColumnId first = 0,
                                   ColumnId last = static_cast<ColumnId>(-1));

// Value of a coalition game: receives the membership mask of the players.
using CoalitionValue = std::function<double(const std::vector<bool>& present)>;

// Classical Shapley values by enumerating all 2^n coalitions.
// Throws Error(kTooManyFeatures) for n > 20.
std::vector<double> BruteForceShapley(std::size_t players, const CoalitionValue& value);

// Game where absent players take values from each background row in turn
// (features outside `players` stay at x) and the model output is averaged.
CoalitionValue BackgroundGame(std::function<double(std::span<const double>)> model, std::vector<double> x,
                              std::vector<std::vector<double>> background, std::vector<ColumnId> players);

// Game where absent features are integrated out down the tree using the node
// covers, which is the expectation TreeSHAP attributes against.
CoalitionValue PathDependentGame(const Tree& tree, std::vector<double> x, std::vector<ColumnId> players);

}  // namespace polads
