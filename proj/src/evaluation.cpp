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

#include "polads/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "polads/error.hpp"
#include "polads/random.hpp"

namespace polads {

SplitPlan PlanAdvertiserSplit(const std::set<std::string>& advertisers, double test_fraction,
                              std::uint64_t seed) {
  if (advertisers.size() < 2) {
    throw Error(ErrorCode::kInsufficientGroups, "an advertiser split needs at least 2 advertisers");
  }
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "test fraction must lie in (0, 1)");
  }
  std::vector<std::string> order(advertisers.begin(), advertisers.end());
  Rng rng(seed);
  rng.Shuffle(std::span<std::string>(order));
  const std::size_t n = order.size();
  auto n_test = static_cast<std::size_t>(std::ceil(test_fraction * static_cast<double>(n) - 1e-9));
  n_test = std::clamp<std::size_t>(n_test, 1, n - 1);

  SplitPlan plan;
  plan.seed = seed;
  plan.test_fraction = test_fraction;
  plan.test_advertisers.insert(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_test));
  plan.train_advertisers.insert(order.begin() + static_cast<std::ptrdiff_t>(n_test), order.end());
  return plan;
}

DatasetSplit SplitByAdvertiser(const Dataset& dataset, double test_fraction, std::uint64_t seed) {
  DatasetSplit split;
  split.plan = PlanAdvertiserSplit(dataset.advertisers(), test_fraction, seed);
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const bool test = split.plan.test_advertisers.contains(dataset[i].record.advertiser);
    (test ? split.test : split.train).push_back(i);
  }
  return split;
}

double HarmonicF1(double precision, double recall) {
  const double sum = precision + recall;
  return sum > 0.0 ? 2.0 * precision * recall / sum : 0.0;
}

MetricsReport ComputeMetrics(std::span<const Label> predicted, std::span<const Label> truth) {
  if (predicted.size() != truth.size() || truth.empty()) {
    throw Error(ErrorCode::kLengthMismatch, "predictions and truth must be non-empty and equally long");
  }
  MetricsReport m;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const bool p = predicted[i] == Label::kPolitical;
    const bool t = truth[i] == Label::kPolitical;
    if (p && t) ++m.tp;
    else if (p) ++m.fp;
    else if (t) ++m.fn;
    else ++m.tn;
  }
  if (m.tp + m.fp > 0) {
    m.precision = 100.0 * static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fp);
  } else {
    m.degenerate = true;
  }
  if (m.tp + m.fn > 0) {
    m.recall = 100.0 * static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fn);
  } else {
    m.degenerate = true;
  }
  if (m.precision + m.recall == 0.0) m.degenerate = true;
  m.f1 = HarmonicF1(m.precision, m.recall);
  return m;
}

std::string MetricsJson(const MetricsReport& m) {
  nlohmann::json doc = {{"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1},
                        {"tp", m.tp},               {"fp", m.fp},         {"fn", m.fn},
                        {"tn", m.tn},               {"degenerate", m.degenerate}};
  return doc.dump(2);
}

double BootstrapPValue(std::span<const double> deltas) {
  const auto non_positive = std::count_if(deltas.begin(), deltas.end(), [](double d) { return d <= 0.0; });
  return static_cast<double>(non_positive + 1) / static_cast<double>(deltas.size() + 1);
}

Dataset BootstrapSample(const Dataset& dataset, ResampleUnit unit, std::uint64_t seed) {
  Rng rng(seed);
  const std::size_t target = dataset.size();
  std::vector<std::size_t> drawn;
  drawn.reserve(target + target / 4);
  if (unit == ResampleUnit::kAds) {
    for (std::size_t i = 0; i < target; ++i) drawn.push_back(rng.UniformIndex(target));
  } else {
    std::map<std::string, std::vector<std::size_t>> by_advertiser;
    for (std::size_t i = 0; i < dataset.size(); ++i) by_advertiser[dataset[i].record.advertiser].push_back(i);
    std::vector<const std::vector<std::size_t>*> groups;
    groups.reserve(by_advertiser.size());
    for (const auto& [name, rows] : by_advertiser) groups.push_back(&rows);
    while (drawn.size() < target) {
      const auto& rows = *groups[rng.UniformIndex(groups.size())];
      drawn.insert(drawn.end(), rows.begin(), rows.end());
    }
  }

  std::vector<std::size_t> copies(dataset.size(), 0);
  std::vector<LabeledAd> records;
  records.reserve(drawn.size());
  for (std::size_t pos : drawn) {
    LabeledAd ad = dataset[pos];
    const std::size_t copy = copies[pos]++;
    if (copy > 0) ad.record.id += "#" + std::to_string(copy);
    records.push_back(std::move(ad));
  }
  return Dataset(std::move(records));
}

namespace {

struct IterationResult {
  double f1_a = 0.0;
  double f1_b = 0.0;
};

std::vector<Label> Truth(const Dataset& d) {
  std::vector<Label> labels;
  labels.reserve(d.size());
  for (const auto& ad : d.records()) labels.push_back(ad.label);
  return labels;
}

IterationResult RunIteration(const Dataset& dataset, const TrainableSystem& a, const TrainableSystem& b,
                             const BootstrapOptions& options, int iteration) {
  const std::uint64_t seed = DeriveSeed(options.seed, static_cast<std::uint64_t>(iteration));
  const Dataset sample = BootstrapSample(dataset, options.unit, seed);
  const DatasetSplit split = SplitByAdvertiser(sample, options.test_fraction, DeriveSeed(seed, 1));
  const Dataset train = sample.Subset(split.train);
  const Dataset test = sample.Subset(split.test);
  const auto truth = Truth(test);
  const auto predict_a = a.train(train);
  const auto predict_b = b.train(train);
  return {ComputeMetrics(predict_a(test), truth).f1, ComputeMetrics(predict_b(test), truth).f1};
}

}  // namespace

BootstrapVerdict PairedBootstrap(const Dataset& dataset, const TrainableSystem& system_a,
                                 const TrainableSystem& system_b, const BootstrapOptions& options) {
  if (options.samples < 1) throw Error(ErrorCode::kInvalidArgument, "bootstrap needs at least one sample");
  if (dataset.advertisers().size() < 2) {
    throw Error(ErrorCode::kInsufficientGroups, "bootstrap needs at least 2 advertisers");
  }
  const auto b = static_cast<std::size_t>(options.samples);
  std::vector<IterationResult> results(b);
  std::vector<std::exception_ptr> failures(b);

  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < b; i = next++) {
      try {
        results[i] = RunIteration(dataset, system_a, system_b, options, static_cast<int>(i));
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  const int threads = std::max(1, options.threads);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  for (std::size_t i = 0; i < b; ++i) {
    if (!failures[i]) continue;
    try {
      std::rethrow_exception(failures[i]);
    } catch (const Error& e) {
      throw Error(e.code(), "bootstrap iteration " + std::to_string(i) + ": " + e.what());
    } catch (const std::exception& e) {
      throw Error(ErrorCode::kInvalidArgument, "bootstrap iteration " + std::to_string(i) + ": " + e.what());
    }
  }

  BootstrapVerdict verdict;
  verdict.samples = options.samples;
  verdict.alpha = options.alpha;
  for (const auto& r : results) {
    verdict.f1_a.push_back(r.f1_a);
    verdict.f1_b.push_back(r.f1_b);
    verdict.deltas.push_back(r.f1_b - r.f1_a);
  }
  verdict.p_value = BootstrapPValue(verdict.deltas);
  verdict.significant = verdict.p_value < options.alpha;
  return verdict;
}

std::string BootstrapJson(const BootstrapVerdict& v, const std::string& name_a, const std::string& name_b) {
  double mean = 0.0;
  for (double d : v.deltas) mean += d;
  if (!v.deltas.empty()) mean /= static_cast<double>(v.deltas.size());
  nlohmann::json doc = {{"system_a", name_a},     {"system_b", name_b},   {"samples", v.samples},
                        {"alpha", v.alpha},       {"p_value", v.p_value}, {"significant", v.significant},
                        {"mean_delta_f1", mean},  {"deltas", v.deltas}};
  return doc.dump(2);
}

std::string BootstrapDeltasCsv(const BootstrapVerdict& v) {
  std::ostringstream out;
  out.precision(17);
  out << "iteration,f1_a,f1_b,delta\n";
  for (std::size_t i = 0; i < v.deltas.size(); ++i) {
    out << i << ',' << v.f1_a[i] << ',' << v.f1_b[i] << ',' << v.deltas[i] << '\n';
  }
  return out.str();
}

}  // namespace polads
