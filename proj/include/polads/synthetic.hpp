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

#ifndef POLADS_SYNTHETIC_HPP_
#define POLADS_SYNTHETIC_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "polads/corpus.hpp"

namespace polads {

// Generator for archive-shaped corpora with known structure. Used by tests,
// the acceptance suite and the polads_synth tool.
struct SyntheticOptions {
  std::size_t ads = 2000;
  std::size_t advertisers = 200;
  double political_share = 0.9;  // of advertisers
  double text_noise = 0.15;      // chance a word comes from the other class
  double vote_noise = 0.1;       // chance a single volunteer vote is flipped
  double targeting_rate = 0.9;   // chance an ad carries a targets payload
  std::uint64_t seed = 1;
};

std::vector<AdRecord> GenerateSyntheticAds(const SyntheticOptions& options);

// GenerateSyntheticAds with the vote rule applied; tied records are dropped.
Dataset SyntheticDataset(const SyntheticOptions& options);

// One JSON record per line.
void WriteJsonLines(std::span<const AdRecord> records, std::ostream& out);

}  // namespace polads

#endif  // POLADS_SYNTHETIC_HPP_
