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

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "polads/corpus.hpp"
#include "polads/sparse.hpp"

namespace polads {

// Inverse class-frequency weights: weight(y) = n_samples / n_samples(y).
struct ClassWeights {
  double political = 1.0;
  double non_political = 1.0;

  double For(Label label) const { return label == Label::kPolitical ? political : non_political; }
};

// Throws Error(kSingleClassTraining) unless both classes occur.
ClassWeights ComputeClassWeights(std::span<const Label> labels);
std::vector<double> SampleWeights(std::span<const Label> labels, const ClassWeights& weights);

struct GbdtParams {
  int n_trees = 100;
  int max_leaves = 31;
  int max_depth = 0;  // 0 = unlimited
  double learning_rate = 0.1;
  int min_samples_leaf = 20;
  double min_gain = 0.0;
  double lambda_l2 = 1.0;
  double feature_subsample = 1.0;  // fraction of columns drawn per tree
  std::uint64_t seed = 0;

  // Throws Error(kInvalidArgument) on out-of-range values.
  void Validate() const;

  bool operator==(const GbdtParams&) const = default;
};

double Sigmoid(double margin);

// Weighted logistic loss for label y in {0, 1} at raw margin f, and its first
// and second derivatives with respect to f.
double LogisticLoss(double margin, double y, double weight);
struct GradHess {
  double grad;
  double hess;
};
GradHess LogisticGradHess(double margin, double y, double weight);

// Regression tree stored as a flat node array; node 0 is the root. A sample
// goes left when value < threshold; NaN follows default_left.
struct Tree {
  struct Node {
    std::int32_t feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    bool default_left = true;
    double value = 0.0;  // leaf output (raw, before learning-rate scaling)
    double cover = 0.0;  // summed sample weight that reached the node

    bool IsLeaf() const { return feature < 0; }
    bool operator==(const Node&) const = default;
  };

  std::vector<Node> nodes;

  double Predict(const SparseVector& x) const;
  int Depth() const;
  std::size_t NumLeaves() const;

  bool operator==(const Tree&) const = default;
};

class GbdtEnsemble {
 public:
  static constexpr std::string_view kFormatVersion = "1.1";

  double base_score = 0.0;
  double learning_rate = 0.1;
  std::size_t num_features = 0;
  std::vector<Tree> trees;
  std::vector<std::string> feature_names;
  GbdtParams params;

  // Throws Error(kDimensionMismatch) when x.dim() != num_features.
  double PredictMargin(const SparseVector& x) const;
  double PredictProba(const SparseVector& x) const { return Sigmoid(PredictMargin(x)); }

  std::string ToJson() const;
  // Accepts every 1.x format. Files older than 1.1 carry no covers; SHAP on
  // them fails with kMissingCover.
  static GbdtEnsemble FromJson(std::string_view text);

  bool operator==(const GbdtEnsemble&) const = default;
};

struct TrainingLog {
  // Total weighted training loss after the base score (index 0) and after
  // each boosting round.
  std::vector<double> loss;
  bool degenerate = false;
};

// Leaf-wise gradient boosting with exact split enumeration.
// Throws Error(kSingleClassTraining), Error(kLengthMismatch),
// Error(kDimensionMismatch), Error(kInvalidArgument).
GbdtEnsemble TrainGbdt(const SparseMatrix& x, std::span<const Label> y, std::span<const double> weights,
                       const GbdtParams& params, TrainingLog* log = nullptr);

}  // namespace polads
