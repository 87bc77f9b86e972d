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

#include "polads/targeting.hpp"

#include <random>

#include <gtest/gtest.h>

#include "polads/error.hpp"

namespace polads {
namespace {

TargetingSpec Spec(std::vector<std::pair<std::string, std::optional<std::string>>> entries) {
  TargetingSpec s;
  for (auto& [t, v] : entries) s.entries.push_back({t, v});
  return s;
}

TEST(ParseTargetsTest, InterestEntry) {
  const auto s = ParseTargets(R"([{"target":"Interest","segment":"Barack Obama"}])");
  ASSERT_EQ(s.entries.size(), 1u);
  EXPECT_EQ(s.entries[0].target, "Interest");
  EXPECT_EQ(s.entries[0].segment, "Barack Obama");
}

TEST(ParseTargetsTest, EmptyPayloads) {
  EXPECT_TRUE(ParseTargets("[]").entries.empty());
  EXPECT_TRUE(ParseTargets("").entries.empty());
  EXPECT_TRUE(ParseTargets("null").entries.empty());
}

TEST(ParseTargetsTest, TwoEntriesAndDuplicatesKept) {
  EXPECT_EQ(ParseTargets(R"([{"target":"MinAge","segment":"18"},{"target":"Region","segment":"Texas"}])").entries.size(), 2u);
  const auto dup = ParseTargets(
      R"([{"target":"Interest","segment":"A"},{"target":"Interest","segment":"A","extra":1},{"target":"Retargeting"}])");
  ASSERT_EQ(dup.entries.size(), 3u);
  EXPECT_FALSE(dup.entries[2].segment.has_value());
}

TEST(ParseTargetsTest, Malformed) {
  for (const char* raw : {"{", "{}", "[1]", R"([{"segment":"x"}])", R"([{"target":""}])", R"([{"target":"A","segment":[1]}])"}) {
    try {
      ParseTargets(raw);
      ADD_FAILURE() << raw;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kMalformedTargets) << raw;
    }
  }
  EXPECT_TRUE(ParseTargetsLenient("{", "ad1").entries.empty());
}

TEST(AgeRangeTest, Grammar) {
  auto check = [](const char* text, std::optional<int> lo, std::optional<int> hi) {
    const AgeBounds b = ParseAgeRange(text);
    EXPECT_EQ(b.min_age, lo) << text;
    EXPECT_EQ(b.max_age, hi) << text;
  };
  check("18 and older", 18, std::nullopt);
  check("25 - 54", 25, 54);
  check("25-54", 25, 54);
  check("25 – 54", 25, 54);
  check("18 to 49", 18, 49);
  check("65+", 65, std::nullopt);
  check("up to 35", std::nullopt, 35);
  check("under 30", std::nullopt, 30);
  check("40 and younger", std::nullopt, 40);
  check("30", 30, 30);
  check("teenagers", std::nullopt, std::nullopt);
  check("", std::nullopt, std::nullopt);
}

TEST(NormalizeTest, DropsStateKeepsRegion) {
  const auto n = NormalizeTargets(Spec({{"State", "CA"}, {"Region", "California"}}));
  EXPECT_EQ(n.categorical, (std::set<AttributeValue>{{"Region", "California"}}));
}

TEST(NormalizeTest, DropsEngagedAndLanguage) {
  const auto n = NormalizeTargets(
      Spec({{"Engaged with Content", "x"}, {"Language", "English (US)"}, {"Interest", "  Politics "}}));
  EXPECT_EQ(n.categorical, (std::set<AttributeValue>{{"Interest", "Politics"}}));
}

TEST(NormalizeTest, MinAgeOnly) {
  const auto n = NormalizeTargets(Spec({{"MinAge", "18"}}));
  EXPECT_EQ(n.min_age, 18);
  EXPECT_FALSE(n.max_age.has_value());
  EXPECT_TRUE(n.categorical.empty());
}

TEST(NormalizeTest, AgeRangeFallback) {
  const auto n = NormalizeTargets(Spec({{"Age", "25 - 54"}}));
  EXPECT_EQ(n.min_age, 25);
  EXPECT_EQ(n.max_age, 54);
}

TEST(NormalizeTest, ExplicitBoundsBeatAge) {
  const auto n = NormalizeTargets(Spec({{"Age", "25 - 54"}, {"MinAge", "30"}}));
  EXPECT_EQ(n.min_age, 30);
  EXPECT_EQ(n.max_age, 54);
}

TEST(NormalizeTest, OutOfRangeAndInvertedAges) {
  EXPECT_FALSE(NormalizeTargets(Spec({{"MinAge", "5"}})).min_age.has_value());
  EXPECT_FALSE(NormalizeTargets(Spec({{"MinAge", "abc"}})).min_age.has_value());
  const auto inv = NormalizeTargets(Spec({{"MinAge", "40"}, {"MaxAge", "30"}}));
  EXPECT_EQ(inv.min_age, 40);
  EXPECT_FALSE(inv.max_age.has_value());
}

TEST(NormalizeTest, ValuelessAttribute) {
  const auto n = NormalizeTargets(Spec({{"Retargeting", std::nullopt}}));
  EXPECT_EQ(n.categorical, (std::set<AttributeValue>{{"Retargeting", ""}}));
}

TEST(NormalizeTest, PropertyInvariants) {
  std::mt19937 gen(11);
  const std::vector<std::string> attrs = {"State", "Region", "Language", "Engaged with Content", "MinAge", "MaxAge",
                                          "Age", "Interest"};
  for (int trial = 0; trial < 500; ++trial) {
    TargetingSpec s;
    const int k = static_cast<int>(gen() % 6);
    for (int i = 0; i < k; ++i) {
      const auto& a = attrs[gen() % attrs.size()];
      s.entries.push_back({a, std::to_string(static_cast<int>(gen() % 140))});
    }
    const auto n = NormalizeTargets(s);
    if (n.min_age) {
      EXPECT_GE(*n.min_age, kMinTargetAge);
      EXPECT_LE(*n.min_age, kMaxTargetAge);
    }
    if (n.min_age && n.max_age) EXPECT_GE(*n.max_age, *n.min_age);
    for (const auto& [attr, value] : n.categorical) {
      EXPECT_NE(attr, "State");
      EXPECT_NE(attr, "Language");
      EXPECT_NE(attr, "Engaged with Content");
      EXPECT_NE(attr, "MinAge");
      EXPECT_NE(attr, "Age");
    }
  }
}

NormalizedTargets Targets(std::set<AttributeValue> cats, std::optional<int> lo = {}, std::optional<int> hi = {}) {
  NormalizedTargets n;
  n.categorical = std::move(cats);
  n.min_age = lo;
  n.max_age = hi;
  return n;
}

TEST(EncoderTest, RegionColumns) {
  const std::vector<NormalizedTargets> train = {Targets({{"Region", "Texas"}}), Targets({{"Region", "Florida"}})};
  const auto enc = TargetEncoder::Fit(train);
  // MinAge, MaxAge, Region_0, Region=Florida, Region=Texas
  EXPECT_EQ(enc.dim(), 5u);
  EXPECT_EQ(enc.ColumnNames(),
            (std::vector<std::string>{"MinAge", "MaxAge", "Region_0", "Region=Florida", "Region=Texas"}));

  const SparseVector texas = enc.Encode(Targets({{"Region", "Texas"}}));
  EXPECT_EQ(texas.Get(*enc.ValueColumn("Region", "Texas")), 1.0);
  EXPECT_EQ(texas.Get(*enc.MissingColumn("Region")), 0.0);
  EXPECT_EQ(texas.Get(TargetEncoder::kMinAgeColumn), -1.0);

  const SparseVector ohio = enc.Encode(Targets({{"Region", "Ohio"}}));
  EXPECT_EQ(ohio.Get(*enc.MissingColumn("Region")), 0.0);
  EXPECT_EQ(ohio.Get(*enc.ValueColumn("Region", "Texas")), 0.0);
  EXPECT_EQ(ohio.Get(*enc.ValueColumn("Region", "Florida")), 0.0);

  const SparseVector empty = enc.Encode(Targets({}));
  EXPECT_EQ(empty.Get(*enc.MissingColumn("Region")), 1.0);
  EXPECT_EQ(empty.Get(TargetEncoder::kMinAgeColumn), -1.0);
  EXPECT_EQ(empty.Get(TargetEncoder::kMaxAgeColumn), -1.0);
}

TEST(EncoderTest, AbsentAttributeHasNoColumns) {
  const auto enc = TargetEncoder::Fit(std::vector<NormalizedTargets>{Targets({{"Region", "Texas"}})});
  EXPECT_FALSE(enc.MissingColumn("Interest").has_value());
  EXPECT_EQ(enc.Encode(Targets({{"Interest", "A"}})).Get(2), 1.0);  // Region_0
}

TEST(EncoderTest, DuplicateValueSingleColumnAndMultiValue) {
  const std::vector<NormalizedTargets> train = {Targets({{"Interest", "Democratic Party"}}),
                                                Targets({{"Interest", "Democratic Party"}, {"Interest", "Bernie Sanders"}})};
  const auto enc = TargetEncoder::Fit(train);
  EXPECT_EQ(enc.dim(), 2u + 1u + 2u);
  const SparseVector v = enc.Encode(train[1]);
  EXPECT_EQ(v.Get(*enc.ValueColumn("Interest", "Democratic Party")), 1.0);
  EXPECT_EQ(v.Get(*enc.ValueColumn("Interest", "Bernie Sanders")), 1.0);
}

TEST(EncoderTest, AgesPlaced) {
  const auto enc = TargetEncoder::Fit(std::vector<NormalizedTargets>{Targets({}, 18, 65)});
  const SparseVector v = enc.Encode(Targets({}, 25, std::nullopt));
  EXPECT_EQ(v.Get(TargetEncoder::kMinAgeColumn), 25.0);
  EXPECT_EQ(v.Get(TargetEncoder::kMaxAgeColumn), -1.0);
}

TEST(EncoderTest, EmptyTrainingSet) {
  try {
    TargetEncoder::Fit(std::vector<NormalizedTargets>{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyTrainingSet);
  }
}

std::vector<NormalizedTargets> RandomTargets(std::mt19937& gen, int n) {
  const std::vector<std::string> attrs = {"Region", "Interest", "Gender", "Retargeting"};
  std::vector<NormalizedTargets> out;
  for (int i = 0; i < n; ++i) {
    NormalizedTargets t;
    if (gen() % 2) t.min_age = 13 + static_cast<int>(gen() % 50);
    if (gen() % 3 == 0) t.max_age = 65;
    const int k = static_cast<int>(gen() % 4);
    for (int j = 0; j < k; ++j) t.categorical.insert({attrs[gen() % attrs.size()], "v" + std::to_string(gen() % 5)});
    out.push_back(std::move(t));
  }
  return out;
}

TEST(EncoderTest, PropertyDeterministicBinaryAndRoundTrip) {
  std::mt19937 gen(5);
  for (int trial = 0; trial < 50; ++trial) {
    const auto train = RandomTargets(gen, 30);
    const auto a = TargetEncoder::Fit(train);
    const auto b = TargetEncoder::Fit(train);
    EXPECT_EQ(a, b);
    EXPECT_EQ(a.ToJson(), b.ToJson());
    const auto back = TargetEncoder::FromJson(a.ToJson());
    EXPECT_EQ(back, a);
    EXPECT_EQ(back.ToJson(), a.ToJson());
    for (const auto& t : RandomTargets(gen, 10)) {
      const SparseVector v = a.Encode(t);
      EXPECT_EQ(v, back.Encode(t));
      EXPECT_EQ(v.dim(), a.dim());
      for (std::size_t i = 0; i < v.nnz(); ++i) {
        const ColumnId c = v.indices()[i];
        if (c == TargetEncoder::kMinAgeColumn || c == TargetEncoder::kMaxAgeColumn) {
          EXPECT_TRUE(v.values()[i] == -1.0 || v.values()[i] >= 13.0);
        } else {
          EXPECT_EQ(v.values()[i], 1.0);
        }
      }
    }
  }
}

TEST(EncoderTest, FromJsonRejectsOtherSchema) {
  EXPECT_THROW(TargetEncoder::FromJson(R"({"schema_version": 99, "columns": []})"), Error);
}

}  // namespace
}  // namespace polads
