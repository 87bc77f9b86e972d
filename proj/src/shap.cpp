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

#include "polads/shap.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <thread>

#include <spdlog/spdlog.h>

#include "polads/error.hpp"

namespace polads {
namespace {

struct PathElement {
  std::int32_t feature;
  double zero_fraction;
  double one_fraction;
  double weight;
};

void ExtendPath(PathElement* path, int depth, double zero_fraction, double one_fraction, std::int32_t feature) {
  path[depth] = {feature, zero_fraction, one_fraction, depth == 0 ? 1.0 : 0.0};
  for (int i = depth - 1; i >= 0; --i) {
    path[i + 1].weight += one_fraction * path[i].weight * (i + 1) / static_cast<double>(depth + 1);
    path[i].weight = zero_fraction * path[i].weight * (depth - i) / static_cast<double>(depth + 1);
  }
}

void UnwindPath(PathElement* path, int depth, int index) {
  const double one = path[index].one_fraction;
  const double zero = path[index].zero_fraction;
  double next_one = path[depth].weight;
  for (int i = depth - 1; i >= 0; --i) {
    if (one != 0.0) {
      const double tmp = path[i].weight;
      path[i].weight = next_one * (depth + 1) / ((i + 1) * one);
      next_one = tmp - path[i].weight * zero * (depth - i) / static_cast<double>(depth + 1);
    } else {
      path[i].weight = path[i].weight * (depth + 1) / (zero * (depth - i));
    }
  }
  for (int i = index; i < depth; ++i) {
    path[i].feature = path[i + 1].feature;
    path[i].zero_fraction = path[i + 1].zero_fraction;
    path[i].one_fraction = path[i + 1].one_fraction;
  }
}

// Total permutation weight of the path with element `index` removed.
double UnwoundPathSum(const PathElement* path, int depth, int index) {
  const double one = path[index].one_fraction;
  const double zero = path[index].zero_fraction;
  double next_one = path[depth].weight;
  double total = 0.0;
  for (int i = depth - 1; i >= 0; --i) {
    if (one != 0.0) {
      const double tmp = next_one * (depth + 1) / ((i + 1) * one);
      total += tmp;
      next_one = path[i].weight - tmp * zero * (depth - i) / static_cast<double>(depth + 1);
    } else if (zero != 0.0) {
      total += path[i].weight / zero / ((depth - i) / static_cast<double>(depth + 1));
    }
  }
  return total;
}

bool GoesLeft(const Tree::Node& node, std::span<const double> x) {
  const double v = x[static_cast<std::size_t>(node.feature)];
  return std::isnan(v) ? node.default_left : v < node.threshold;
}

class TreeShapRunner {
 public:
  TreeShapRunner(const Tree& tree, std::span<const double> x, std::span<double> phi, double scale)
      : tree_(tree), x_(x), phi_(phi), scale_(scale) {
    const auto depth = static_cast<std::size_t>(tree.Depth()) + 2;
    path_.resize(depth * (depth + 1) / 2 + depth);
  }

  void Run() { Recurse(0, path_.data(), 0, 1.0, 1.0, -1); }

 private:
  void Recurse(std::size_t node_index, PathElement* parent_path, int depth, double zero_fraction,
               double one_fraction, std::int32_t feature) {
    PathElement* path = parent_path + depth + 1;
    if (depth > 0) std::copy(parent_path, parent_path + depth + 1, path);
    else path = parent_path;
    ExtendPath(path, depth, zero_fraction, one_fraction, feature);

    const Tree::Node& node = tree_.nodes[node_index];
    if (node.IsLeaf()) {
      for (int i = 1; i <= depth; ++i) {
        const double w = UnwoundPathSum(path, depth, i);
        const PathElement& el = path[i];
        phi_[static_cast<std::size_t>(el.feature)] +=
            scale_ * w * (el.one_fraction - el.zero_fraction) * node.value;
      }
      return;
    }

    const bool left = GoesLeft(node, x_);
    const auto hot = static_cast<std::size_t>(left ? node.left : node.right);
    const auto cold = static_cast<std::size_t>(left ? node.right : node.left);
    const double cover = node.cover;
    const double hot_zero = tree_.nodes[hot].cover / cover;
    const double cold_zero = tree_.nodes[cold].cover / cover;

    double incoming_zero = 1.0, incoming_one = 1.0;
    int index = 0;
    for (; index <= depth; ++index) {
      if (path[index].feature == node.feature) break;
    }
    if (index != depth + 1) {
      incoming_zero = path[index].zero_fraction;
      incoming_one = path[index].one_fraction;
      UnwindPath(path, depth, index);
      --depth;
    }
    Recurse(hot, path, depth + 1, hot_zero * incoming_zero, incoming_one, node.feature);
    Recurse(cold, path, depth + 1, cold_zero * incoming_zero, 0.0, node.feature);
  }

  const Tree& tree_;
  std::span<const double> x_;
  std::span<double> phi_;
  double scale_;
  std::vector<PathElement> path_;
};

void CheckCovers(const Tree& tree) {
  for (const auto& node : tree.nodes) {
    if (!node.IsLeaf() && !(node.cover > 0.0 && std::isfinite(node.cover))) {
      throw Error(ErrorCode::kMissingCover, "tree node without a positive cover");
    }
    if (!std::isfinite(node.cover)) throw Error(ErrorCode::kMissingCover, "tree node without a cover");
  }
}

double ExpectedFrom(const Tree& tree, std::size_t i) {
  const auto& node = tree.nodes[i];
  if (node.IsLeaf()) return node.value;
  const auto l = static_cast<std::size_t>(node.left), r = static_cast<std::size_t>(node.right);
  return (tree.nodes[l].cover * ExpectedFrom(tree, l) + tree.nodes[r].cover * ExpectedFrom(tree, r)) / node.cover;
}

}  // namespace

void TreeShap(const Tree& tree, std::span<const double> x, std::span<double> phi, double scale) {
  CheckCovers(tree);
  if (tree.nodes.size() <= 1) return;
  TreeShapRunner(tree, x, phi, scale).Run();
}

double TreeExpectedValue(const Tree& tree) {
  CheckCovers(tree);
  return ExpectedFrom(tree, 0);
}

ShapMatrix EnsembleShap(const GbdtEnsemble& model, const SparseMatrix& x, int threads) {
  for (const auto& tree : model.trees) CheckCovers(tree);
  if (x.cols != model.num_features) {
    throw Error(ErrorCode::kDimensionMismatch, "SHAP input width differs from the model");
  }
  ShapMatrix out;
  out.feature_names = model.feature_names;
  out.base_value = model.base_score;
  for (const auto& tree : model.trees) out.base_value += model.learning_rate * TreeExpectedValue(tree);
  out.values.resize(x.size());

  // Only split features can receive attribution.
  std::vector<ColumnId> used;
  for (const auto& tree : model.trees) {
    for (const auto& node : tree.nodes) {
      if (!node.IsLeaf()) used.push_back(static_cast<ColumnId>(node.feature));
    }
  }
  std::sort(used.begin(), used.end());
  used.erase(std::unique(used.begin(), used.end()), used.end());

  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    std::vector<double> dense(model.num_features, 0.0);
    std::vector<double> phi(model.num_features, 0.0);
    for (std::size_t i = next++; i < x.size(); i = next++) {
      const auto& row = x.rows[i];
      for (std::size_t k = 0; k < row.nnz(); ++k) dense[row.indices()[k]] = row.values()[k];
      for (const auto& tree : model.trees) TreeShap(tree, dense, phi, model.learning_rate);
      SparseVector attributions(model.num_features);
      for (ColumnId f : used) {
        if (phi[f] != 0.0) attributions.PushBack(f, phi[f]);
        phi[f] = 0.0;
      }
      for (std::size_t k = 0; k < row.nnz(); ++k) dense[row.indices()[k]] = 0.0;
      out.values[i] = std::move(attributions);
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  return out;
}

ImportanceRanking GlobalImportance(const ShapMatrix& shap, std::size_t top_k, ColumnId first, ColumnId last) {
  if (shap.values.empty()) throw Error(ErrorCode::kEmptyMatrix, "no SHAP rows");
  std::map<ColumnId, double> sums;
  for (const auto& row : shap.values) {
    for (std::size_t k = 0; k < row.nnz(); ++k) {
      const ColumnId c = row.indices()[k];
      if (c >= first && c < last) sums[c] += std::abs(row.values()[k]);
    }
  }
  std::vector<std::pair<ColumnId, double>> ranked;
  const double n = static_cast<double>(shap.values.size());
  for (const auto& [col, sum] : sums) {
    if (sum > 0.0) ranked.emplace_back(col, sum / n);
  }
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  if (ranked.empty()) spdlog::warn("all SHAP attributions in the requested columns are zero");
  if (top_k > 0 && ranked.size() > top_k) ranked.resize(top_k);

  ImportanceRanking out;
  for (const auto& [col, score] : ranked) {
    const std::string name = col < shap.feature_names.size() ? shap.feature_names[col] : "f" + std::to_string(col);
    out.entries.emplace_back(name, score);
    out.columns.push_back(col);
  }
  return out;
}

std::vector<double> BruteForceShapley(std::size_t players, const CoalitionValue& value) {
  if (players > 20) throw Error(ErrorCode::kTooManyFeatures, std::to_string(players) + " players");
  const std::size_t n = players;
  // weight[s] = s! (n - s - 1)! / n!
  std::vector<double> weight(n, 0.0);
  for (std::size_t s = 0; s < n; ++s) {
    double w = 1.0;
    for (std::size_t k = 1; k <= s; ++k) w *= static_cast<double>(k) / static_cast<double>(n - s - 1 + k);
    weight[s] = w / static_cast<double>(n);
  }
  const std::size_t coalitions = std::size_t{1} << n;
  std::vector<double> v(coalitions);
  std::vector<bool> mask(n);
  for (std::size_t m = 0; m < coalitions; ++m) {
    for (std::size_t j = 0; j < n; ++j) mask[j] = (m >> j) & 1U;
    v[m] = value(mask);
  }
  std::vector<double> phi(n, 0.0);
  for (std::size_t m = 0; m < coalitions; ++m) {
    const auto size = static_cast<std::size_t>(__builtin_popcountll(m));
    for (std::size_t j = 0; j < n; ++j) {
      if ((m >> j) & 1U) continue;
      phi[j] += weight[size] * (v[m | (std::size_t{1} << j)] - v[m]);
    }
  }
  return phi;
}

CoalitionValue BackgroundGame(std::function<double(std::span<const double>)> model, std::vector<double> x,
                              std::vector<std::vector<double>> background, std::vector<ColumnId> players) {
  return [model = std::move(model), x = std::move(x), background = std::move(background),
          players = std::move(players)](const std::vector<bool>& present) {
    double total = 0.0;
    std::vector<double> z = x;
    for (const auto& b : background) {
      for (std::size_t j = 0; j < players.size(); ++j) z[players[j]] = present[j] ? x[players[j]] : b[players[j]];
      total += model(z);
    }
    return total / static_cast<double>(background.size());
  };
}

CoalitionValue PathDependentGame(const Tree& tree, std::vector<double> x, std::vector<ColumnId> players) {
  return [&tree, x = std::move(x), players = std::move(players)](const std::vector<bool>& present) {
    std::vector<bool> known(x.size(), true);
    for (std::size_t j = 0; j < players.size(); ++j) known[players[j]] = present[j];
    const std::function<double(std::size_t)> expect = [&](std::size_t i) -> double {
      const auto& node = tree.nodes[i];
      if (node.IsLeaf()) return node.value;
      const auto l = static_cast<std::size_t>(node.left), r = static_cast<std::size_t>(node.right);
      if (known[static_cast<std::size_t>(node.feature)]) return expect(GoesLeft(node, x) ? l : r);
      return (tree.nodes[l].cover * expect(l) + tree.nodes[r].cover * expect(r)) / node.cover;
    };
    return expect(0);
  };
}

}  // namespace polads
