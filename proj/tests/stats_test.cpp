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

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "polads/error.hpp"
#include "test_util.hpp"

namespace polads {
namespace {

using testing::MakeAd;

std::string Interest(const std::string& v) { return R"([{"target":"Interest","segment":")" + v + R"("}])"; }

TEST(CorpusStatsTest, NineToOneRatio) {
  std::vector<LabeledAd> ads;
  for (int i = 0; i < 10; ++i) {
    ads.push_back(MakeAd("a" + std::to_string(i), i < 9 ? Label::kPolitical : Label::kNonPolitical));
  }
  const StatsReport r = CorpusStats(Dataset(ads));
  EXPECT_EQ(r.political, 9u);
  EXPECT_EQ(r.not_political, 1u);
  ASSERT_TRUE(r.political_ratio.has_value());
  EXPECT_DOUBLE_EQ(*r.political_ratio, 9.0);
}

TEST(CorpusStatsTest, SingleRegion) {
  const std::string texas = R"([{"target":"Region","segment":"Texas"}])";
  const Dataset ds({MakeAd("a", Label::kPolitical, "x", "m", texas), MakeAd("b", Label::kPolitical, "x", "m", texas),
                    MakeAd("c", Label::kPolitical, "y", "m", texas)});
  const StatsReport r = CorpusStats(ds);
  ASSERT_EQ(r.regions.size(), 1u);
  EXPECT_EQ(r.regions[0].name, "Texas");
  EXPECT_EQ(r.regions[0].political_ads, 3u);
}

TEST(CorpusStatsTest, TopInterests) {
  const Dataset ds({MakeAd("a", Label::kPolitical, "x", "m", Interest("Obama")),
                    MakeAd("b", Label::kPolitical, "x", "m", Interest("Obama")),
                    MakeAd("c", Label::kPolitical, "x", "m", Interest("Sanders"))});
  const StatsReport r = CorpusStats(ds);
  ASSERT_EQ(r.top_interests.size(), 2u);
  EXPECT_EQ(r.top_interests[0].name, "Obama");
  EXPECT_EQ(r.top_interests[0].political_ads, 2u);
  EXPECT_EQ(r.top_interests[1].name, "Sanders");
  EXPECT_EQ(r.top_interests[1].political_ads, 1u);
}

TEST(CorpusStatsTest, TopKTruncates) {
  std::vector<LabeledAd> ads;
  for (int i = 0; i < 20; ++i) ads.push_back(MakeAd("a" + std::to_string(i), Label::kPolitical, "x", "m", Interest("I" + std::to_string(i))));
  EXPECT_EQ(CorpusStats(Dataset(ads), 10).top_interests.size(), 10u);
  EXPECT_EQ(CorpusStats(Dataset(ads), 3).top_interests.size(), 3u);
}

TEST(CorpusStatsTest, EmptyDatasetRejected) {
  EXPECT_THROW(CorpusStats(Dataset{}), Error);
}

TEST(CorpusStatsTest, NoNonPoliticalMeansNoRatio) {
  const StatsReport r = CorpusStats(Dataset({MakeAd("a", Label::kPolitical)}));
  EXPECT_FALSE(r.political_ratio.has_value());
  EXPECT_TRUE(nlohmann::json::parse(StatsJson(r))["political_ratio"].is_null());
}

TEST(CorpusStatsTest, CountsAreConsistent) {
  const std::string t1 = R"([{"target":"Region","segment":"Ohio"},{"target":"Interest","segment":"A"},{"target":"Interest","segment":"B"}])";
  const std::string t2 = R"([{"target":"State","segment":"OH"},{"target":"Age","segment":"18 and older"}])";
  const Dataset ds({MakeAd("a", Label::kPolitical, "x", "m", t1), MakeAd("b", Label::kNonPolitical, "y", "m", t2),
                    MakeAd("c", Label::kPolitical, "y", "m", "not json"), MakeAd("d", Label::kPolitical, "z")});
  const StatsReport r = CorpusStats(ds);
  EXPECT_EQ(r.political + r.not_political, ds.size());
  EXPECT_EQ(r.malformed_targets, 1u);
  EXPECT_EQ(r.advertisers, 3u);
  for (const auto& a : r.attributes) {
    EXPECT_LE(a.ads, r.total_ads);
    EXPECT_LE(a.political_ads, a.ads);
  }
  // Interest appears twice on one ad but is counted once for it.
  const auto interest = std::find_if(r.attributes.begin(), r.attributes.end(), [](const auto& a) { return a.name == "Interest"; });
  ASSERT_NE(interest, r.attributes.end());
  EXPECT_EQ(interest->ads, 1u);
}

TEST(CorpusStatsTest, CsvTablesHaveHeaderAndQuotedStrings) {
  const Dataset ds({MakeAd("a", Label::kPolitical, "x", "m", R"([{"target":"Region","segment":"New \"York\""}])")});
  const StatsReport r = CorpusStats(ds);
  EXPECT_EQ(RegionsCsv(r), "\"region\",\"ads\",\"political_ads\"\n\"New \"\"York\"\"\",1,1\n");
  EXPECT_EQ(AttributesCsv(r).substr(0, 12), "\"attribute\",");
}

}  // namespace
}  // namespace polads
