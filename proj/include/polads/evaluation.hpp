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
#include <functional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "polads/corpus.hpp"

namespace polads {

// Advertiser-level holdout: every advertiser's ads fall on one side.
struct SplitPlan {
  std::set<std::string> train_advertisers;
  std::set<std::string> test_advertisers;
  std::uint64_t seed = 0;
  double test_fraction = 0.2;
};

// Shuffles the advertisers with `seed` and sends the first
// ceil(fraction * n) to test, clamped so each side keeps at least one.
// Throws Error(kInsufficientGroups) for fewer than two advertisers.
SplitPlan PlanAdvertiserSplit(const std::set<std::string>& advertisers, double test_fraction,
                              std::uint64_t seed);

struct DatasetSplit {
  SplitPlan plan;
  std::vector<std::size_t> train;  // positions into the dataset, in order
  std::vector<std::size_t> test;
};

DatasetSplit SplitByAdvertiser(const Dataset& dataset, double test_fraction = 0.2, std::uint64_t seed = 0);

// Precision, recall and F1 in percent with Political as the positive class.
struct MetricsReport {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;
  // Set when a zero denominator forced a metric to 0.
  bool degenerate = false;
};

// Harmonic mean 2PR/(P+R), or 0 when P+R is 0.
double HarmonicF1(double precision, double recall);

// Throws Error(kLengthMismatch) for unequal or empty inputs.
MetricsReport ComputeMetrics(std::span<const Label> predicted, std::span<const Label> truth);

std::string MetricsJson(const MetricsReport& report);

// A system that can be trained on a dataset and then label another.
struct TrainableSystem {
  using Predictor = std::function<std::vector<Label>(const Dataset& test)>;

  std::string name;
  std::function<Predictor(const Dataset& train)> train;
};

enum class ResampleUnit { kAdvertisers, kAds };

struct BootstrapOptions {
  int samples = 1000;
  double alpha = 0.05;
  std::uint64_t seed = 0;
  double test_fraction = 0.2;
  ResampleUnit unit = ResampleUnit::kAdvertisers;
  int threads = 1;
};

struct BootstrapVerdict {
  int samples = 0;
  double alpha = 0.05;
  std::vector<double> f1_a;    // per iteration, percent
  std::vector<double> f1_b;
  std::vector<double> deltas;  // f1_b - f1_a
  double p_value = 1.0;
  bool significant = false;
};

// p = (#{delta <= 0} + 1) / (B + 1), one-sided with H1: B beats A.
double BootstrapPValue(std::span<const double> deltas);

// Resamples the dataset (advertisers with replacement until the ad count
// first reaches the original size, or individual ads), splits each sample by
// advertiser, retrains both systems on the train part and compares F1 on the
// test part. Errors are rethrown tagged with the iteration index.
BootstrapVerdict PairedBootstrap(const Dataset& dataset, const TrainableSystem& system_a,
                                 const TrainableSystem& system_b, const BootstrapOptions& options);

// The resampled dataset for one iteration. Repeated ads get "#<copy>" id
// suffixes; copies of an advertiser keep its name and so split together.
Dataset BootstrapSample(const Dataset& dataset, ResampleUnit unit, std::uint64_t seed);

std::string BootstrapJson(const BootstrapVerdict& verdict, const std::string& name_a, const std::string& name_b);
std::string BootstrapDeltasCsv(const BootstrapVerdict& verdict);

}  // namespace polads
