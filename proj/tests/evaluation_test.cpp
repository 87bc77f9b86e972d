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
#include <cmath>
#include <random>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "polads/error.hpp"
#include "test_util.hpp"

namespace polads {
namespace {

using testing::MakeAd;
constexpr Label P = Label::kPolitical;
constexpr Label N = Label::kNonPolitical;

// `advertisers` advertisers with `sizes[i % sizes.size()]` ads each; within an
// advertiser every third ad is non-political.
Dataset Fixture(int advertisers, std::vector<int> sizes = {3}) {
  std::vector<LabeledAd> ads;
  for (int a = 0; a < advertisers; ++a) {
    const int n = sizes[static_cast<std::size_t>(a) % sizes.size()];
    for (int i = 0; i < n; ++i) {
      ads.push_back(MakeAd("a" + std::to_string(a) + "_" + std::to_string(i), i % 3 == 2 ? N : P,
                           "adv" + std::to_string(a)));
    }
  }
  return Dataset(std::move(ads));
}

std::set<std::string> AdvertisersAt(const Dataset& ds, const std::vector<std::size_t>& pos) {
  std::set<std::string> out;
  for (auto i : pos) out.insert(ds[i].record.advertiser);
  return out;
}

TEST(SplitTest, FiveAdvertisers) {
  const Dataset ds = Fixture(5);
  const DatasetSplit s = SplitByAdvertiser(ds, 0.2, 1);
  EXPECT_EQ(s.plan.test_advertisers.size(), 1u);
  EXPECT_EQ(AdvertisersAt(ds, s.test), s.plan.test_advertisers);
  for (const auto& a : s.plan.test_advertisers) EXPECT_FALSE(s.plan.train_advertisers.contains(a));
  EXPECT_EQ(s.train.size() + s.test.size(), ds.size());
}

TEST(SplitTest, SameSeedSameSplit) {
  const Dataset ds = Fixture(20);
  EXPECT_EQ(SplitByAdvertiser(ds, 0.2, 5).test, SplitByAdvertiser(ds, 0.2, 5).test);
}

TEST(SplitTest, UnitIsAdvertisers) {
  const Dataset ds = Fixture(10, {1, 7, 2, 12, 3});
  const DatasetSplit s = SplitByAdvertiser(ds, 0.2, 3);
  ASSERT_EQ(s.plan.test_advertisers.size(), 2u);
  std::size_t expected = 0;
  for (const auto& ad : ds.records()) expected += s.plan.test_advertisers.contains(ad.record.advertiser);
  EXPECT_EQ(s.test.size(), expected);
}

TEST(SplitTest, CeilingAndClamp) {
  std::set<std::string> advs;
  for (int i = 0; i < 7; ++i) advs.insert("x" + std::to_string(i));
  EXPECT_EQ(PlanAdvertiserSplit(advs, 0.2, 0).test_advertisers.size(), 2u);  // ceil(1.4)
  EXPECT_EQ(PlanAdvertiserSplit(advs, 0.01, 0).test_advertisers.size(), 1u);
  EXPECT_EQ(PlanAdvertiserSplit(advs, 0.99, 0).test_advertisers.size(), 6u);
  std::set<std::string> ten;
  for (int i = 0; i < 10; ++i) ten.insert("y" + std::to_string(i));
  EXPECT_EQ(PlanAdvertiserSplit(ten, 0.3, 0).test_advertisers.size(), 3u);  // 0.3 * 10 is not 3 in binary
  try {
    PlanAdvertiserSplit({"only"}, 0.2, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInsufficientGroups);
  }
}

TEST(SplitTest, PropertyDisjointOverManySeeds) {
  const Dataset ds = Fixture(37, {1, 2, 5});
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const DatasetSplit s = SplitByAdvertiser(ds, 0.2, seed);
    const auto train = AdvertisersAt(ds, s.train);
    for (const auto& a : AdvertisersAt(ds, s.test)) ASSERT_FALSE(train.contains(a));
    EXPECT_EQ(s.plan.train_advertisers.size() + s.plan.test_advertisers.size(), 37u);
  }
}

TEST(MetricsTest, TablePrecisionRecallPairs) {
  EXPECT_NEAR(HarmonicF1(88.75, 96.65), 92.53, 0.01);
  EXPECT_NEAR(HarmonicF1(90.33, 99.25), 94.58, 0.01);
  EXPECT_NEAR(HarmonicF1(90.83, 99.68), 95.05, 0.01);
  EXPECT_EQ(HarmonicF1(0.0, 0.0), 0.0);
}

TEST(MetricsTest, PerfectAndCounts) {
  const std::vector<Label> truth = {P, N, P, P, N};
  const MetricsReport m = ComputeMetrics(truth, truth);
  EXPECT_EQ(m.precision, 100.0);
  EXPECT_EQ(m.recall, 100.0);
  EXPECT_EQ(m.f1, 100.0);
  EXPECT_FALSE(m.degenerate);

  const std::vector<Label> pred = {P, P, N, P, N};
  const MetricsReport r = ComputeMetrics(pred, truth);
  EXPECT_EQ(r.tp, 2u);
  EXPECT_EQ(r.fp, 1u);
  EXPECT_EQ(r.fn, 1u);
  EXPECT_EQ(r.tn, 1u);
  EXPECT_NEAR(r.precision, 200.0 / 3.0, 1e-12);
  EXPECT_NEAR(r.recall, 200.0 / 3.0, 1e-12);
}

TEST(MetricsTest, DegenerateAndErrors) {
  const std::vector<Label> none = {N, N};
  const MetricsReport m = ComputeMetrics(none, std::vector<Label>{P, N});
  EXPECT_TRUE(m.degenerate);
  EXPECT_EQ(m.precision, 0.0);
  EXPECT_EQ(m.f1, 0.0);
  EXPECT_THROW(ComputeMetrics(none, std::vector<Label>{P}), Error);
  EXPECT_THROW(ComputeMetrics(std::vector<Label>{}, std::vector<Label>{}), Error);
}

TEST(MetricsTest, PropertyPermutationInvariantAndConsistent) {
  std::mt19937 gen(8);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + gen() % 40;
    std::vector<Label> pred(n), truth(n);
    for (std::size_t i = 0; i < n; ++i) {
      pred[i] = gen() % 2 ? P : N;
      truth[i] = gen() % 2 ? P : N;
    }
    const MetricsReport a = ComputeMetrics(pred, truth);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), gen);
    std::vector<Label> p2, t2;
    for (auto i : order) {
      p2.push_back(pred[i]);
      t2.push_back(truth[i]);
    }
    const MetricsReport b = ComputeMetrics(p2, t2);
    EXPECT_EQ(a.f1, b.f1);
    EXPECT_EQ(a.tp + a.fp + a.fn + a.tn, n);
    if (a.precision + a.recall > 0) {
      EXPECT_NEAR(a.f1, 2 * a.precision * a.recall / (a.precision + a.recall), 1e-9);
    }
  }
}

TEST(PValueTest, Formula) {
  EXPECT_DOUBLE_EQ(BootstrapPValue(std::vector<double>{0, 0, 0}), 1.0);
  EXPECT_DOUBLE_EQ(BootstrapPValue(std::vector<double>{1, 2, 3}), 0.25);
  EXPECT_DOUBLE_EQ(BootstrapPValue(std::vector<double>{1}), 0.5);
  EXPECT_DOUBLE_EQ(BootstrapPValue(std::vector<double>{-1}), 1.0);
  // Fewer non-positive deltas, smaller p.
  std::vector<double> d(10, -1.0);
  double last = BootstrapPValue(d);
  for (auto& v : d) {
    v = 1.0;
    const double p = BootstrapPValue(d);
    EXPECT_LT(p, last);
    last = p;
  }
}

TrainableSystem Constant(Label label) {
  return {"constant", [label](const Dataset&) {
            return TrainableSystem::Predictor(
                [label](const Dataset& test) { return std::vector<Label>(test.size(), label); });
          }};
}

TrainableSystem Oracle() {
  return {"oracle", [](const Dataset&) {
            return TrainableSystem::Predictor([](const Dataset& test) {
              std::vector<Label> out;
              for (const auto& ad : test.records()) out.push_back(ad.label);
              return out;
            });
          }};
}

BootstrapOptions Options(int b, std::uint64_t seed = 11) {
  BootstrapOptions o;
  o.samples = b;
  o.seed = seed;
  return o;
}

TEST(BootstrapTest, SelfComparisonIsNull) {
  const Dataset ds = Fixture(15);
  const BootstrapVerdict v = PairedBootstrap(ds, Constant(P), Constant(P), Options(50));
  EXPECT_EQ(v.deltas.size(), 50u);
  for (double d : v.deltas) EXPECT_EQ(d, 0.0);
  EXPECT_EQ(v.p_value, 1.0);
  EXPECT_FALSE(v.significant);
}

TEST(BootstrapTest, OracleDominates) {
  const Dataset ds = Fixture(15);
  const BootstrapVerdict v = PairedBootstrap(ds, Constant(P), Oracle(), Options(100));
  for (double d : v.deltas) EXPECT_GT(d, 0.0);
  EXPECT_DOUBLE_EQ(v.p_value, 1.0 / 101.0);
  EXPECT_TRUE(v.significant);
}

TEST(BootstrapTest, SingleSample) {
  const Dataset ds = Fixture(15);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const double p = PairedBootstrap(ds, Constant(P), Oracle(), Options(1, seed)).p_value;
    EXPECT_TRUE(p == 0.5 || p == 1.0);
  }
}

TEST(BootstrapTest, ReproducibleAndThreadIndependent) {
  const Dataset ds = Fixture(25, {1, 4, 6});
  // A system whose F1 depends on the sample: predict political unless the
  // ad id ends in an even digit.
  const TrainableSystem quirky{"quirky", [](const Dataset&) {
                                 return TrainableSystem::Predictor([](const Dataset& test) {
                                   std::vector<Label> out;
                                   for (const auto& ad : test.records()) {
                                     const char c = ad.record.id[ad.record.id.find('_') + 1];
                                     out.push_back((c - '0') % 2 ? P : N);
                                   }
                                   return out;
                                 });
                               }};
  BootstrapOptions o = Options(40, 3);
  const auto a = PairedBootstrap(ds, Constant(P), quirky, o);
  const auto b = PairedBootstrap(ds, Constant(P), quirky, o);
  o.threads = 4;
  const auto c = PairedBootstrap(ds, Constant(P), quirky, o);
  EXPECT_EQ(a.deltas, b.deltas);
  EXPECT_EQ(a.deltas, c.deltas);
  EXPECT_EQ(a.f1_a, c.f1_a);
  const auto d = PairedBootstrap(ds, Constant(P), quirky, Options(40, 4));
  EXPECT_NE(a.deltas, d.deltas);
}

TEST(BootstrapTest, SampleShape) {
  const Dataset ds = Fixture(20, {1, 5, 2});
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Dataset s = BootstrapSample(ds, ResampleUnit::kAdvertisers, seed);
    EXPECT_GE(s.size(), ds.size());
    // Stops at the first advertiser that reaches the size.
    EXPECT_LT(s.size(), ds.size() + 5);
    std::map<std::string, std::size_t> per_adv;
    for (const auto& ad : s.records()) {
      ++per_adv[ad.record.advertiser];
      const std::string base = ad.record.id.substr(0, ad.record.id.find('#'));
      EXPECT_EQ(base.substr(1, base.find('_') - 1), ad.record.advertiser.substr(3));
    }
    const Dataset t = BootstrapSample(ds, ResampleUnit::kAds, seed);
    EXPECT_EQ(t.size(), ds.size());
  }
}

TEST(BootstrapTest, ErrorsCarryIterationIndex) {
  const Dataset ds = Fixture(10);
  const TrainableSystem broken{"broken", [](const Dataset&) -> TrainableSystem::Predictor {
                                 throw Error(ErrorCode::kEmptyTrainingSet, "boom");
                               }};
  try {
    PairedBootstrap(ds, Constant(P), broken, Options(3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("iteration 0"), std::string::npos) << e.what();
  }
}

TEST(BootstrapTest, ReportFormats) {
  const Dataset ds = Fixture(15);
  const BootstrapVerdict v = PairedBootstrap(ds, Constant(P), Oracle(), Options(5));
  const auto doc = nlohmann::json::parse(BootstrapJson(v, "base", "new"));
  EXPECT_EQ(doc["system_a"], "base");
  EXPECT_EQ(doc["samples"], 5);
  const std::string csv = BootstrapDeltasCsv(v);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 6);
}

}  // namespace
}  // namespace polads
