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
#include <optional>
#include <string>
#include <vector>

#include "polads/corpus.hpp"

namespace polads {

struct TargetUsage {
  std::string name;  // attribute name or attribute value
  std::size_t ads = 0;
  std::size_t political_ads = 0;
};

// Aggregate description of a labeled corpus and how its ads were targeted.
// Attribute counts come from the raw targets payload, so attributes dropped
// from the feature space (State, Age, Language, ...) are still reported.
struct StatsReport {
  std::size_t total_ads = 0;
  std::size_t political = 0;
  std::size_t not_political = 0;
  std::optional<double> political_ratio;  // political / not_political
  std::size_t advertisers = 0;
  std::size_t malformed_targets = 0;
  std::vector<TargetUsage> attributes;     // ads using each attribute, most used first
  std::vector<TargetUsage> regions;        // per Region value, most political ads first
  std::vector<TargetUsage> top_interests;  // top-K Interest values among political ads
};

// Throws Error(kEmptyDataset).
StatsReport CorpusStats(const Dataset& dataset, std::size_t top_k_interests = 10);

std::string StatsJson(const StatsReport& report);
std::string AttributesCsv(const StatsReport& report);
std::string RegionsCsv(const StatsReport& report);
std::string InterestsCsv(const StatsReport& report);

}  // namespace polads
