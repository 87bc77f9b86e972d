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

#include "polads/gbdt.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "polads/error.hpp"
#include "polads/gbdt_json.hpp"
#include "polads/random.hpp"

namespace polads {

ClassWeights ComputeClassWeights(std::span<const Label> labels) {
  std::size_t political = 0;
  for (Label l : labels) political += l == Label::kPolitical ? 1 : 0;
  const std::size_t non_political = labels.size() - political;
  if (political == 0 || non_political == 0) {
    throw Error(ErrorCode::kSingleClassTraining, "class weights need both classes");
  }
  const double n = static_cast<double>(labels.size());
  return {n / static_cast<double>(political), n / static_cast<double>(non_political)};
}

std::vector<double> SampleWeights(std::span<const Label> labels, const ClassWeights& weights) {
  std::vector<double> out;
  out.reserve(labels.size());
  for (Label l : labels) out.push_back(weights.For(l));
  return out;
}

void GbdtParams::Validate() const {
  const auto require = [](bool ok, const char* what) {
    if (!ok) throw Error(ErrorCode::kInvalidArgument, what);
  };
  require(n_trees >= 0, "n_trees must be >= 0");
  require(max_leaves >= 2, "max_leaves must be >= 2");
  require(max_depth >= 0, "max_depth must be >= 0");
  require(learning_rate > 0.0 && std::isfinite(learning_rate), "learning_rate must be positive");
  require(min_samples_leaf >= 1, "min_samples_leaf must be >= 1");
  require(min_gain >= 0.0, "min_gain must be >= 0");
  require(lambda_l2 >= 0.0, "lambda_l2 must be >= 0");
  require(feature_subsample > 0.0 && feature_subsample <= 1.0, "feature_subsample must be in (0, 1]");
}

double Sigmoid(double margin) {
  if (margin >= 0.0) return 1.0 / (1.0 + std::exp(-margin));
  const double e = std::exp(margin);
  return e / (1.0 + e);
}

double LogisticLoss(double margin, double y, double weight) {
  // log(1 + e^f) - y f, evaluated without overflow.
  const double softplus = std::max(margin, 0.0) + std::log1p(std::exp(-std::abs(margin)));
  return weight * (softplus - y * margin);
}

GradHess LogisticGradHess(double margin, double y, double weight) {
  const double p = Sigmoid(margin);
  return {weight * (p - y), weight * p * (1.0 - p)};
}

double Tree::Predict(const SparseVector& x) const {
  std::size_t node = 0;
  while (!nodes[node].IsLeaf()) {
    const Node& n = nodes[node];
    const double v = x.Get(static_cast<ColumnId>(n.feature));
    const bool left = std::isnan(v) ? n.default_left : v < n.threshold;
    node = static_cast<std::size_t>(left ? n.left : n.right);
  }
  return nodes[node].value;
}

int Tree::Depth() const {
  std::vector<int> depth(nodes.size(), 0);
  int best = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    best = std::max(best, depth[i]);
    if (!nodes[i].IsLeaf()) {
      depth[static_cast<std::size_t>(nodes[i].left)] = depth[i] + 1;
      depth[static_cast<std::size_t>(nodes[i].right)] = depth[i] + 1;
    }
  }
  return best;
}

std::size_t Tree::NumLeaves() const {
  return static_cast<std::size_t>(
      std::count_if(nodes.begin(), nodes.end(), [](const Node& n) { return n.IsLeaf(); }));
}

double GbdtEnsemble::PredictMargin(const SparseVector& x) const {
  if (x.dim() != num_features) {
    throw Error(ErrorCode::kDimensionMismatch, "input has " + std::to_string(x.dim()) +
                                                   " features, model expects " + std::to_string(num_features));
  }
  double sum = 0.0;
  for (const auto& tree : trees) sum += tree.Predict(x);
  return base_score + learning_rate * sum;
}

namespace {

struct Entry {
  ColumnId feature;
  std::uint32_t row;
  double value;
};

bool EntryLess(const Entry& a, const Entry& b) {
  if (a.feature != b.feature) return a.feature < b.feature;
  const bool an = std::isnan(a.value), bn = std::isnan(b.value);
  if (an != bn) return bn;
  if (!an && a.value != b.value) return a.value < b.value;
  return a.row < b.row;
}

struct Split {
  bool valid = false;
  double gain = 0.0;
  ColumnId feature = 0;
  double threshold = 0.0;
  bool default_left = true;
};

struct Stats {
  double grad = 0.0;
  double hess = 0.0;
  std::size_t count = 0;

  void Add(double g, double h, std::size_t c) {
    grad += g;
    hess += h;
    count += c;
  }
};

struct GrowingLeaf {
  std::size_t node = 0;
  int depth = 0;
  std::vector<std::uint32_t> rows;
  std::vector<Entry> entries;  // sorted by EntryLess
  Stats stats;
  Split best;
};

class SplitFinder {
 public:
  SplitFinder(std::span<const double> grad, std::span<const double> hess, const GbdtParams& params)
      : grad_(grad), hess_(hess), params_(params) {}

  Split Find(const GrowingLeaf& leaf) const {
    Split best;
    best.gain = params_.min_gain;
    const std::size_t n = leaf.rows.size();
    const auto min_leaf = static_cast<std::size_t>(params_.min_samples_leaf);
    if (n < 2 * min_leaf) return best;
    const double lambda = params_.lambda_l2;
    const Stats& total = leaf.stats;
    if (total.hess + lambda <= 0.0) return best;
    const double parent_score = total.grad * total.grad / (total.hess + lambda);

    struct Group {
      double value;
      Stats stats;
    };
    std::vector<Group> groups;
    const auto& entries = leaf.entries;
    std::size_t i = 0;
    while (i < entries.size()) {
      const ColumnId feature = entries[i].feature;
      groups.clear();
      Stats stored, missing;
      std::size_t j = i;
      for (; j < entries.size() && entries[j].feature == feature; ++j) {
        const Entry& e = entries[j];
        const double g = grad_[e.row], h = hess_[e.row];
        if (std::isnan(e.value)) {
          missing.Add(g, h, 1);
          continue;
        }
        stored.Add(g, h, 1);
        if (groups.empty() || groups.back().value != e.value) groups.push_back({e.value, {}});
        groups.back().stats.Add(g, h, 1);
      }
      i = j;

      // Rows without a stored entry hold an implicit zero.
      const std::size_t zero_count = n - stored.count - missing.count;
      if (zero_count > 0) {
        Stats zero{total.grad - stored.grad - missing.grad, total.hess - stored.hess - missing.hess, zero_count};
        const auto pos = std::lower_bound(groups.begin(), groups.end(), 0.0,
                                          [](const Group& g, double v) { return g.value < v; });
        groups.insert(pos, Group{0.0, zero});
      }
      if (groups.size() < 2) continue;

      Stats left;
      for (std::size_t b = 0; b + 1 < groups.size(); ++b) {
        left.Add(groups[b].stats.grad, groups[b].stats.hess, groups[b].stats.count);
        const double lo = groups[b].value, hi = groups[b + 1].value;
        double threshold = lo + (hi - lo) / 2.0;
        if (!(threshold > lo) || !std::isfinite(threshold)) threshold = hi;

        const auto consider = [&](const Stats& l, bool default_left) {
          const Stats r{total.grad - l.grad, total.hess - l.hess, n - l.count};
          if (l.count < min_leaf || r.count < min_leaf) return;
          if (l.hess + lambda <= 0.0 || r.hess + lambda <= 0.0) return;
          const double gain = 0.5 * (l.grad * l.grad / (l.hess + lambda) +
                                     r.grad * r.grad / (r.hess + lambda) - parent_score);
          if (gain > best.gain) best = {true, gain, feature, threshold, default_left};
        };
        if (missing.count == 0) {
          consider(left, left.count >= n - left.count);
        } else {
          Stats with_missing = left;
          with_missing.Add(missing.grad, missing.hess, missing.count);
          consider(with_missing, true);
          consider(left, false);
        }
      }
    }
    return best;
  }

 private:
  std::span<const double> grad_;
  std::span<const double> hess_;
  const GbdtParams& params_;
};

Stats RowStats(std::span<const std::uint32_t> rows, std::span<const double> grad,
               std::span<const double> hess) {
  Stats s;
  for (auto r : rows) s.Add(grad[r], hess[r], 1);
  return s;
}

double RowCover(std::span<const std::uint32_t> rows, std::span<const double> weights) {
  double c = 0.0;
  for (auto r : rows) c += weights[r];
  return c;
}

double LeafValue(const Stats& s, double lambda) {
  const double denom = s.hess + lambda;
  return denom > 0.0 ? -s.grad / denom : 0.0;
}

}  // namespace

GbdtEnsemble TrainGbdt(const SparseMatrix& x, std::span<const Label> y, std::span<const double> weights,
                       const GbdtParams& params, TrainingLog* log) {
  params.Validate();
  const std::size_t n = x.size();
  if (y.size() != n || weights.size() != n) {
    throw Error(ErrorCode::kLengthMismatch, "features, labels and weights must have equal length");
  }
  if (n > std::numeric_limits<std::uint32_t>::max()) throw Error(ErrorCode::kInvalidArgument, "too many rows");

  std::vector<double> target(n);
  double pos_mass = 0.0, neg_mass = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(weights[i] > 0.0) || !std::isfinite(weights[i])) {
      throw Error(ErrorCode::kInvalidArgument, "sample weights must be positive and finite");
    }
    if (x.rows[i].dim() != x.cols) throw Error(ErrorCode::kDimensionMismatch, "ragged feature matrix");
    target[i] = y[i] == Label::kPolitical ? 1.0 : 0.0;
    (y[i] == Label::kPolitical ? pos_mass : neg_mass) += weights[i];
  }
  if (pos_mass == 0.0 || neg_mass == 0.0) {
    throw Error(ErrorCode::kSingleClassTraining, "training labels hold a single class");
  }

  GbdtEnsemble model;
  model.params = params;
  model.learning_rate = params.learning_rate;
  model.num_features = x.cols;
  model.base_score = std::log(pos_mass / neg_mass);
  model.feature_names.reserve(x.cols);
  for (std::size_t f = 0; f < x.cols; ++f) model.feature_names.push_back("f" + std::to_string(f));

  std::vector<double> margin(n, model.base_score);
  std::vector<double> grad(n), hess(n);
  const auto total_loss = [&] {
    double loss = 0.0;
    for (std::size_t i = 0; i < n; ++i) loss += LogisticLoss(margin[i], target[i], weights[i]);
    return loss;
  };
  if (log) log->loss.assign(1, total_loss());

  // Presorted (feature, value) entries of every row; each leaf keeps the
  // stable partition of its parent's list.
  std::vector<Entry> all_entries;
  {
    std::size_t nnz = 0;
    for (const auto& row : x.rows) nnz += row.nnz();
    all_entries.reserve(nnz);
    for (std::size_t r = 0; r < n; ++r) {
      const auto& row = x.rows[r];
      for (std::size_t k = 0; k < row.nnz(); ++k) {
        all_entries.push_back({row.indices()[k], static_cast<std::uint32_t>(r), row.values()[k]});
      }
    }
    std::sort(all_entries.begin(), all_entries.end(), EntryLess);
  }

  std::vector<std::uint32_t> all_rows(n);
  std::iota(all_rows.begin(), all_rows.end(), 0u);
  std::vector<std::uint8_t> goes_left(n, 0);
  const SplitFinder finder(grad, hess, params);

  for (int round = 0; round < params.n_trees; ++round) {
    for (std::size_t i = 0; i < n; ++i) {
      const GradHess gh = LogisticGradHess(margin[i], target[i], weights[i]);
      grad[i] = gh.grad;
      hess[i] = gh.hess;
    }

    GrowingLeaf root;
    root.rows = all_rows;
    if (params.feature_subsample < 1.0 && x.cols > 0) {
      std::vector<ColumnId> columns(x.cols);
      std::iota(columns.begin(), columns.end(), 0u);
      Rng rng(DeriveSeed(params.seed, static_cast<std::uint64_t>(round)));
      rng.Shuffle(std::span<ColumnId>(columns));
      const auto keep = std::max<std::size_t>(
          1, static_cast<std::size_t>(std::llround(params.feature_subsample * static_cast<double>(x.cols))));
      std::vector<std::uint8_t> allowed(x.cols, 0);
      for (std::size_t k = 0; k < keep && k < columns.size(); ++k) allowed[columns[k]] = 1;
      for (const Entry& e : all_entries) {
        if (allowed[e.feature]) root.entries.push_back(e);
      }
    } else {
      root.entries = all_entries;
    }
    root.stats = RowStats(root.rows, grad, hess);

    Tree tree;
    tree.nodes.push_back({});
    tree.nodes[0].value = LeafValue(root.stats, params.lambda_l2);
    tree.nodes[0].cover = RowCover(root.rows, weights);
    root.best = finder.Find(root);

    std::vector<GrowingLeaf> leaves;
    leaves.push_back(std::move(root));
    const auto can_split = [&](const GrowingLeaf& leaf) {
      return leaf.best.valid && (params.max_depth == 0 || leaf.depth < params.max_depth);
    };

    while (static_cast<int>(leaves.size()) < params.max_leaves) {
      std::size_t pick = leaves.size();
      for (std::size_t k = 0; k < leaves.size(); ++k) {
        if (!can_split(leaves[k])) continue;
        if (pick == leaves.size() || leaves[k].best.gain > leaves[pick].best.gain ||
            (leaves[k].best.gain == leaves[pick].best.gain && leaves[k].node < leaves[pick].node)) {
          pick = k;
        }
      }
      if (pick == leaves.size()) break;

      GrowingLeaf parent = std::move(leaves[pick]);
      leaves.erase(leaves.begin() + static_cast<std::ptrdiff_t>(pick));
      const Split split = parent.best;

      GrowingLeaf left, right;
      left.depth = right.depth = parent.depth + 1;
      for (auto r : parent.rows) {
        const double v = x.rows[r].Get(split.feature);
        const bool go_left = std::isnan(v) ? split.default_left : v < split.threshold;
        goes_left[r] = go_left ? 1 : 0;
        (go_left ? left.rows : right.rows).push_back(r);
      }
      for (const Entry& e : parent.entries) (goes_left[e.row] ? left.entries : right.entries).push_back(e);
      parent.entries = {};
      left.stats = RowStats(left.rows, grad, hess);
      right.stats = RowStats(right.rows, grad, hess);

      left.node = tree.nodes.size();
      right.node = left.node + 1;
      Tree::Node& p = tree.nodes[parent.node];
      p.feature = static_cast<std::int32_t>(split.feature);
      p.threshold = split.threshold;
      p.default_left = split.default_left;
      p.left = static_cast<std::int32_t>(left.node);
      p.right = static_cast<std::int32_t>(right.node);
      for (GrowingLeaf* child : {&left, &right}) {
        Tree::Node node;
        node.value = LeafValue(child->stats, params.lambda_l2);
        node.cover = RowCover(child->rows, weights);
        tree.nodes.push_back(node);
      }
      left.best = finder.Find(left);
      right.best = finder.Find(right);
      leaves.push_back(std::move(left));
      leaves.push_back(std::move(right));
    }

    if (tree.nodes.size() == 1) {
      if (round == 0) {
        spdlog::warn("no split improves the loss; the model is the class prior only");
        if (log) log->degenerate = true;
      }
      break;
    }
    for (const auto& leaf : leaves) {
      const double step = params.learning_rate * tree.nodes[leaf.node].value;
      for (auto r : leaf.rows) margin[r] += step;
    }
    model.trees.push_back(std::move(tree));
    if (log) log->loss.push_back(total_loss());
  }
  return model;
}

void to_json(nlohmann::json& j, const GbdtParams& p) {
  j = {{"n_trees", p.n_trees},
       {"max_leaves", p.max_leaves},
       {"max_depth", p.max_depth},
       {"learning_rate", p.learning_rate},
       {"min_samples_leaf", p.min_samples_leaf},
       {"min_gain", p.min_gain},
       {"lambda_l2", p.lambda_l2},
       {"feature_subsample", p.feature_subsample},
       {"seed", p.seed}};
}

void from_json(const nlohmann::json& j, GbdtParams& p) {
  GbdtParams d;
  p.n_trees = j.value("n_trees", d.n_trees);
  p.max_leaves = j.value("max_leaves", d.max_leaves);
  p.max_depth = j.value("max_depth", d.max_depth);
  p.learning_rate = j.value("learning_rate", d.learning_rate);
  p.min_samples_leaf = j.value("min_samples_leaf", d.min_samples_leaf);
  p.min_gain = j.value("min_gain", d.min_gain);
  p.lambda_l2 = j.value("lambda_l2", d.lambda_l2);
  p.feature_subsample = j.value("feature_subsample", d.feature_subsample);
  p.seed = j.value("seed", d.seed);
}

std::string GbdtEnsemble::ToJson() const {
  nlohmann::json jtrees = nlohmann::json::array();
  for (const auto& tree : trees) {
    std::vector<std::int32_t> feature, left, right;
    std::vector<double> threshold, value, cover;
    std::vector<bool> default_left;
    for (const auto& node : tree.nodes) {
      feature.push_back(node.feature);
      threshold.push_back(node.threshold);
      left.push_back(node.left);
      right.push_back(node.right);
      default_left.push_back(node.default_left);
      value.push_back(node.value);
      cover.push_back(node.cover);
    }
    nlohmann::json jt = {{"feature", feature},       {"threshold", threshold}, {"left", left},
                         {"right", right},           {"default_left", default_left}, {"value", value}};
    // Trees loaded from files without covers stay without them.
    if (std::none_of(cover.begin(), cover.end(), [](double c) { return std::isnan(c); })) jt["cover"] = cover;
    jtrees.push_back(std::move(jt));
  }
  nlohmann::json doc = {{"format_version", kFormatVersion},
                        {"type", "gbdt"},
                        {"params", params},
                        {"base_score", base_score},
                        {"learning_rate", learning_rate},
                        {"num_features", num_features},
                        {"feature_names", feature_names},
                        {"trees", jtrees}};
  return doc.dump(1);
}

GbdtEnsemble GbdtEnsemble::FromJson(std::string_view text) {
  try {
    const auto doc = nlohmann::json::parse(text);
    if (doc.at("type") != "gbdt") throw Error(ErrorCode::kBadConfig, "not a GBDT model");
    const std::string version = doc.at("format_version");
    int major = 0;
    const auto [ptr, ec] = std::from_chars(version.data(), version.data() + version.size(), major);
    if (ec != std::errc() || major != 1) {
      throw Error(ErrorCode::kBadConfig, "unsupported GBDT format version " + version);
    }
    GbdtEnsemble m;
    m.params = doc.at("params").get<GbdtParams>();
    m.base_score = doc.at("base_score");
    m.learning_rate = doc.at("learning_rate");
    m.num_features = doc.at("num_features");
    m.feature_names = doc.at("feature_names").get<std::vector<std::string>>();
    if (m.feature_names.size() != m.num_features) {
      throw Error(ErrorCode::kBadConfig, "feature name table does not match num_features");
    }
    for (const auto& jt : doc.at("trees")) {
      const auto feature = jt.at("feature").get<std::vector<std::int32_t>>();
      const auto threshold = jt.at("threshold").get<std::vector<double>>();
      const auto left = jt.at("left").get<std::vector<std::int32_t>>();
      const auto right = jt.at("right").get<std::vector<std::int32_t>>();
      const auto default_left = jt.at("default_left").get<std::vector<bool>>();
      const auto value = jt.at("value").get<std::vector<double>>();
      std::vector<double> cover(feature.size(), std::numeric_limits<double>::quiet_NaN());
      if (jt.contains("cover")) cover = jt.at("cover").get<std::vector<double>>();
      const std::size_t count = feature.size();
      if (threshold.size() != count || left.size() != count || right.size() != count ||
          default_left.size() != count || value.size() != count || cover.size() != count || count == 0) {
        throw Error(ErrorCode::kBadConfig, "tree arrays differ in length");
      }
      Tree tree;
      for (std::size_t k = 0; k < count; ++k) {
        Tree::Node node{feature[k], threshold[k], left[k], right[k], default_left[k], value[k], cover[k]};
        if (!node.IsLeaf()) {
          const auto in_range = [&](std::int32_t c) {
            return c > static_cast<std::int32_t>(k) && static_cast<std::size_t>(c) < count;
          };
          if (!in_range(node.left) || !in_range(node.right) ||
              static_cast<std::size_t>(node.feature) >= m.num_features) {
            throw Error(ErrorCode::kBadConfig, "tree node references out of range");
          }
        }
        tree.nodes.push_back(node);
      }
      m.trees.push_back(std::move(tree));
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kBadConfig, std::string("GBDT model: ") + e.what());
  }
}

}  // namespace polads
