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

#include "polads/stats.hpp"

#include <algorithm>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "polads/csv.hpp"
#include "polads/error.hpp"
#include "polads/targeting.hpp"
#include "strings.hpp"

namespace polads {
namespace {

std::vector<TargetUsage> Ranked(const std::map<std::string, TargetUsage>& counts, bool by_political) {
  std::vector<TargetUsage> out;
  for (const auto& [name, usage] : counts) out.push_back(usage);
  std::stable_sort(out.begin(), out.end(), [by_political](const TargetUsage& a, const TargetUsage& b) {
    const auto ka = by_political ? a.political_ads : a.ads;
    const auto kb = by_political ? b.political_ads : b.ads;
    return ka > kb;
  });
  return out;
}

nlohmann::json UsageJson(const std::vector<TargetUsage>& rows) {
  auto arr = nlohmann::json::array();
  for (const auto& r : rows) arr.push_back({{"name", r.name}, {"ads", r.ads}, {"political_ads", r.political_ads}});
  return arr;
}

std::string UsageCsv(const std::vector<TargetUsage>& rows, const char* key) {
  std::string out = CsvLine({CsvQuote(key), CsvQuote("ads"), CsvQuote("political_ads")});
  for (const auto& r : rows) {
    out += CsvLine({CsvQuote(r.name), std::to_string(r.ads), std::to_string(r.political_ads)});
  }
  return out;
}

}  // namespace

StatsReport CorpusStats(const Dataset& dataset, std::size_t top_k_interests) {
  if (dataset.empty()) throw Error(ErrorCode::kEmptyDataset, "no labeled ads");
  StatsReport report;
  report.total_ads = dataset.size();
  report.political = dataset.CountLabel(Label::kPolitical);
  report.not_political = report.total_ads - report.political;
  if (report.not_political > 0) {
    report.political_ratio = static_cast<double>(report.political) / static_cast<double>(report.not_political);
  }
  report.advertisers = dataset.advertisers().size();

  std::map<std::string, TargetUsage> attributes, regions, interests;
  for (const auto& ad : dataset.records()) {
    const bool political = ad.label == Label::kPolitical;
    TargetingSpec spec;
    try {
      spec = ParseTargets(ad.record.targets_raw);
    } catch (const Error&) {
      ++report.malformed_targets;
      continue;
    }
    std::set<std::string> seen_attributes, seen_regions, seen_interests;
    for (const auto& entry : spec.entries) {
      const std::string attribute(internal::Trim(entry.target));
      seen_attributes.insert(attribute);
      const std::string value = entry.segment ? std::string(internal::Trim(*entry.segment)) : std::string();
      if (value.empty()) continue;
      if (attribute == "Region") seen_regions.insert(value);
      if (attribute == "Interest") seen_interests.insert(value);
    }
    const auto bump = [political](std::map<std::string, TargetUsage>& table, const std::set<std::string>& keys) {
      for (const auto& key : keys) {
        auto& usage = table[key];
        usage.name = key;
        ++usage.ads;
        if (political) ++usage.political_ads;
      }
    };
    bump(attributes, seen_attributes);
    bump(regions, seen_regions);
    bump(interests, seen_interests);
  }
  report.attributes = Ranked(attributes, false);
  report.regions = Ranked(regions, true);
  auto ranked_interests = Ranked(interests, true);
  std::erase_if(ranked_interests, [](const TargetUsage& u) { return u.political_ads == 0; });
  if (ranked_interests.size() > top_k_interests) ranked_interests.resize(top_k_interests);
  report.top_interests = std::move(ranked_interests);
  return report;
}

std::string StatsJson(const StatsReport& r) {
  nlohmann::json doc = {{"total_ads", r.total_ads},
                        {"political", r.political},
                        {"not_political", r.not_political},
                        {"political_ratio", r.political_ratio ? nlohmann::json(*r.political_ratio) : nlohmann::json()},
                        {"advertisers", r.advertisers},
                        {"malformed_targets", r.malformed_targets},
                        {"attributes", UsageJson(r.attributes)},
                        {"regions", UsageJson(r.regions)},
                        {"top_interests", UsageJson(r.top_interests)}};
  return doc.dump(2);
}

std::string AttributesCsv(const StatsReport& r) { return UsageCsv(r.attributes, "attribute"); }
std::string RegionsCsv(const StatsReport& r) { return UsageCsv(r.regions, "region"); }
std::string InterestsCsv(const StatsReport& r) { return UsageCsv(r.top_interests, "interest"); }

}  // namespace polads
