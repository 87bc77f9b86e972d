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

#ifndef POLADS_TESTS_RANDOM_TREES_HPP_
#define POLADS_TESTS_RANDOM_TREES_HPP_

#include <cmath>
#include <random>
#include <vector>

#include "polads/gbdt.hpp"

namespace polads::testing {

// Random regression tree over `features` columns with depth at most
// `max_depth`. Covers are random but consistent (children sum to the parent).
// Features may repeat along a path.
inline Tree RandomTree(std::mt19937_64& gen, int features, int max_depth) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Tree tree;
  tree.nodes.push_back({});
  tree.nodes[0].cover = 1.0 + 99.0 * unit(gen);
  struct Pending {
    std::int32_t node;
    int depth;
  };
  std::vector<Pending> stack{{0, 0}};
  while (!stack.empty()) {
    const Pending p = stack.back();
    stack.pop_back();
    const bool split = p.depth < max_depth && (p.depth == 0 || unit(gen) < 0.75);
    if (!split) {
      tree.nodes[p.node].value = 4.0 * unit(gen) - 2.0;
      continue;
    }
    const auto left = static_cast<std::int32_t>(tree.nodes.size());
    const double share = 0.05 + 0.9 * unit(gen);
    const double cover = tree.nodes[p.node].cover;
    tree.nodes.push_back({});
    tree.nodes.push_back({});
    Tree::Node& node = tree.nodes[p.node];
    node.feature = static_cast<std::int32_t>(gen() % static_cast<unsigned>(features));
    node.threshold = std::round(unit(gen) * 8.0) / 4.0 - 0.125;
    node.left = left;
    node.right = left + 1;
    node.default_left = gen() % 2 == 0;
    tree.nodes[left].cover = cover * share;
    tree.nodes[left + 1].cover = cover * (1.0 - share);
    stack.push_back({left + 1, p.depth + 1});
    stack.push_back({left, p.depth + 1});
  }
  return tree;
}

// Dense row on the same value grid as the thresholds, with an occasional NaN.
inline std::vector<double> RandomRow(std::mt19937_64& gen, int features) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> row(static_cast<std::size_t>(features));
  for (auto& v : row) v = unit(gen) < 0.05 ? std::nan("") : std::round(unit(gen) * 8.0) / 4.0;
  return row;
}

}  // namespace polads::testing

#endif  // POLADS_TESTS_RANDOM_TREES_HPP_
