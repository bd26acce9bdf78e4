// Copyright 2026 The xadl Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "xadl/heatmap.hpp"

#include <gtest/gtest.h>

#include <random>

#include "cases.hpp"
#include "xadl/errors.hpp"

namespace xadl {
namespace {

using testing::Clock;

const ActivitySet& Acts() {
  static const ActivitySet a({"preparing hot meal", "eating"});
  return a;
}

const std::map<std::string, std::string, std::less<>>& Names() {
  static const std::map<std::string, std::string, std::less<>> m{
      {"stove_on", "StoveOn"}, {"in_kitchen", "InKitchen"}, {"tv_on", "TelevisionOn"}};
  return m;
}

HeatmapExplanation Sample() {
  return {{{"stove_on", {{Clock(12, 0, 2), Clock(12, 0, 5), 0.9}, {Clock(12, 0, 7), Clock(12, 0, 9), 0.2}}},
           {"in_kitchen", {{Clock(12, 0, 0), Clock(12, 0, 16), 0.5}}},
           {"tv_on", {{Clock(12, 0, 0), Clock(12, 0, 16), 0.1}}}}};
}

TEST(HeatmapToAttributionsTest, StrictThresholdKeepsAllSegments) {
  const AttributionSet a = HeatmapToAttributions(Sample(), 0.5, "Preparing Hot Meal", Acts(), Names());
  EXPECT_EQ(a.predicted_activity, "preparing hot meal");
  ASSERT_EQ(a.features.size(), 1u);
  EXPECT_EQ(a.features[0].property, "StoveOn");
  EXPECT_EQ(a.features[0].intervals.size(), 2u);
}

TEST(HeatmapToAttributionsTest, Options) {
  HeatmapOptions o;
  o.inclusive = true;
  EXPECT_EQ(HeatmapToAttributions(Sample(), 0.5, "eating", Acts(), Names(), o).features.size(), 2u);
  o.inclusive = false;
  o.all_segments = false;
  const auto a = HeatmapToAttributions(Sample(), 0.5, "eating", Acts(), Names(), o);
  ASSERT_EQ(a.features.size(), 1u);
  EXPECT_EQ(a.features[0].intervals.size(), 1u);
}

TEST(HeatmapToAttributionsTest, NothingAboveThresholdIsEmpty) {
  EXPECT_TRUE(HeatmapToAttributions(Sample(), 0.95, "eating", Acts(), Names()).features.empty());
}

TEST(HeatmapToAttributionsTest, Errors) {
  auto hm = Sample();
  hm.rows.push_back({"mystery", {{Clock(12, 0, 0), Clock(12, 0, 1), 0.0}}});
  EXPECT_THROW(HeatmapToAttributions(hm, 0.5, "eating", Acts(), Names()), UnmappedFeature);
  EXPECT_THROW(HeatmapToAttributions(Sample(), 0.5, "sleeping", Acts(), Names()), UnknownActivity);
  EXPECT_THROW(HeatmapToAttributions(Sample(), 1.5, "eating", Acts(), Names()), InvalidParameters);
  hm = Sample();
  hm.rows[0].segments[0].max_intensity = 1.2;
  EXPECT_THROW(HeatmapToAttributions(hm, 0.5, "eating", Acts(), Names()), SchemaViolation);
}

TEST(HeatmapToAttributionsTest, MonotoneInThreshold) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int n = 0; n < 100; ++n) {
    HeatmapExplanation hm;
    for (const auto& [feature, _] : Names()) {
      HeatmapRow row{feature, {}};
      for (int s = 0; s < 3; ++s) row.segments.push_back({Clock(12, 0, 5 * s), Clock(12, 0, 5 * s + 4), u(rng)});
      hm.rows.push_back(row);
    }
    const double hi = u(rng), lo = hi * u(rng);
    const auto a_hi = HeatmapToAttributions(hm, hi, "eating", Acts(), Names());
    const auto a_lo = HeatmapToAttributions(hm, lo, "eating", Acts(), Names());
    for (const auto& f : a_hi.features) {
      EXPECT_TRUE(std::any_of(a_lo.features.begin(), a_lo.features.end(),
                              [&](const AttributedFeature& g) { return g == f; }));
    }
  }
}

TEST(InterchangeTest, RoundTripAndValidation) {
  AttributionSet a = HeatmapToAttributions(Sample(), 0.4, "eating", Acts(), Names());
  a.window = Interval{Clock(12, 0, 0), Clock(12, 0, 16)};
  const std::string doc = SaveAttributionInterchange(a);
  EXPECT_EQ(LoadAttributionInterchange(doc), a);
  EXPECT_TRUE(LoadAttributionInterchange(R"({"version":1,"predicted_activity":"eating","features":[]})")
                  .features.empty());
  EXPECT_THROW(LoadAttributionInterchange(R"({"version":1,"predicted_activity":"eating","features":[
      {"property":"StoveOn","intervals":[["2024-03-04 12:00:09","2024-03-04 12:00:02"]]}]})"),
               SchemaViolation);
  EXPECT_THROW(LoadAttributionInterchange(R"({"predicted_activity":"eating"})"), SchemaViolation);
  EXPECT_THROW(LoadAttributionInterchange("[]"), SchemaViolation);
  EXPECT_THROW(LoadAttributionInterchange(R"({"version":2,"predicted_activity":"x","features":[]})"),
               SchemaViolation);
}

TEST(ReadHeatmapCsvTest, GroupsRowsInFirstSeenOrder) {
  const auto hm = ReadHeatmapCsv(
      "feature,start,end,max_intensity\n"
      "stove_on,2024-03-04 12:00:07,2024-03-04 12:00:09,0.2\n"
      "in_kitchen,2024-03-04 12:00:00,2024-03-04 12:00:16,0.5\n"
      "stove_on,2024-03-04 12:00:02,2024-03-04 12:00:05,0.9\n");
  ASSERT_EQ(hm.rows.size(), 2u);
  EXPECT_EQ(hm.rows[0].feature, "stove_on");
  ASSERT_EQ(hm.rows[0].segments.size(), 2u);
  EXPECT_EQ(hm.rows[0].segments[0].start, Clock(12, 0, 2));
  EXPECT_THROW(ReadHeatmapCsv("stove_on,2024-03-04 12:00:07,0.2\n"), MalformedRow);
  EXPECT_THROW(ReadHeatmapCsv("stove_on,2024-03-04 12:00:07,2024-03-04 12:00:09,high\n"), MalformedRow);
}

}  // namespace
}  // namespace xadl
