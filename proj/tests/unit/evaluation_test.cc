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

#include "xadl/evaluation.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "oracles.hpp"
#include "xadl/errors.hpp"

namespace xadl {
namespace {

std::vector<LabeledWindow> Windows(const std::vector<std::pair<std::string, int>>& counts) {
  std::vector<LabeledWindow> out;
  std::size_t index = 0;
  const Timestamp t0 = Timestamp::FromCivil(2024, 3, 4);
  for (const auto& [label, n] : counts) {
    for (int i = 0; i < n; ++i, ++index) {
      out.push_back({{index, t0 + Seconds(index), t0 + Seconds(index + 1), {}}, label});
    }
  }
  return out;
}

std::size_t CountOf(const std::vector<LabeledWindow>& w, const std::string& label) {
  return static_cast<std::size_t>(
      std::count_if(w.begin(), w.end(), [&](const LabeledWindow& x) { return x.activity == label; }));
}

TEST(ScoreTest, PerfectPredictions) {
  const ActivitySet acts({"a", "b", "c"});
  const std::vector<ScoredPair> pairs{{"a", "a"}, {"b", "b"}, {"c", "c"}, {"a", "a"}};
  const EvalReport r = Score(pairs, acts);
  EXPECT_EQ(r.weighted_f1, 1.0);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j <= 3; ++j) EXPECT_EQ(r.confusion[i][j] > 0, i == j);
  }
}

TEST(ScoreTest, HandWorkedTwoClassCase) {
  // Supports (2, 2); class a fully right, one b predicted as a.
  const ActivitySet acts({"a", "b"});
  const std::vector<ScoredPair> pairs{{"a", "a"}, {"a", "a"}, {"b", "b"}, {"b", "a"}};
  const EvalReport r = Score(pairs, acts);
  // a: P = 2/3, R = 1, F1 = 0.8. b: P = 1, R = 1/2, F1 = 2/3.
  EXPECT_NEAR(r.classes[0].f1, 0.8, 1e-12);
  EXPECT_NEAR(r.classes[1].f1, 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(r.weighted_f1, (0.8 + 2.0 / 3.0) / 2.0, 1e-12);
  EXPECT_EQ(r.confusion[1][0], 1u);
}

TEST(ScoreTest, HallucinationsAreWrong) {
  const ActivitySet acts({"a"});
  const std::vector<ScoredPair> pairs{{"a", "", PredictionStatus::kHallucinated},
                                      {"a", "", PredictionStatus::kHallucinated}};
  const EvalReport r = Score(pairs, acts);
  EXPECT_EQ(r.weighted_f1, 0.0);
  EXPECT_EQ(r.hallucinated, 2u);
  EXPECT_EQ(r.confusion[0][1], 2u);
  EXPECT_EQ(r.classes[0].support, 2u);
}

TEST(ScoreTest, SkippedExcludedAndErrors) {
  const ActivitySet acts({"a", "b"});
  EXPECT_THROW(Score({}, acts), EmptyInput);
  const std::vector<ScoredPair> only_skipped{{"a", "", PredictionStatus::kSkipped}};
  EXPECT_THROW(Score(only_skipped, acts), EmptyInput);
  const std::vector<ScoredPair> unknown{{"a", "z"}};
  EXPECT_THROW(Score(unknown, acts), UnknownActivity);
  const std::vector<ScoredPair> mixed{{"a", "a"}, {"b", "", PredictionStatus::kSkipped}};
  const EvalReport r = Score(mixed, acts);
  EXPECT_EQ(r.scored, 1u);
  EXPECT_EQ(r.skipped, 1u);
}

TEST(ScoreTest, MatchesOracleAndIsPermutationInvariant) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 5);
    std::vector<std::string> labels;
    for (int i = 0; i < n; ++i) labels.push_back("c" + std::to_string(i));
    const ActivitySet acts(labels);
    const int m = 1 + static_cast<int>(rng() % 60);
    std::vector<int> truth, pred;
    std::vector<ScoredPair> pairs;
    for (int k = 0; k < m; ++k) {
      truth.push_back(static_cast<int>(rng() % n));
      pred.push_back(static_cast<int>(rng() % (n + 1)) - 1);
      pairs.push_back({labels[truth.back()], pred.back() < 0 ? "" : labels[pred.back()],
                       pred.back() < 0 ? PredictionStatus::kUnparseable : PredictionStatus::kOk});
    }
    const auto want = testing::BruteForceMetrics(truth, pred, n);
    const EvalReport got = Score(pairs, acts);
    EXPECT_NEAR(got.weighted_f1, want.weighted_f1, 1e-12);
    EXPECT_EQ(got.confusion, want.confusion);
    std::shuffle(pairs.begin(), pairs.end(), rng);
    EXPECT_NEAR(Score(pairs, acts).weighted_f1, got.weighted_f1, 1e-12);
  }
}

TEST(ReportTest, Serializations) {
  const ActivitySet acts({"a", "b, c"});
  const std::vector<ScoredPair> pairs{{"a", "a"}, {"b, c", "a"}};
  const EvalReport r = Score(pairs, acts);
  EXPECT_EQ(r.ToConfusionCsv(), "truth,a,\"b, c\",(failed)\na,1,0,0\n\"b, c\",1,0,0\n");
  EXPECT_NE(r.ToJson().find("\"weighted_f1\""), std::string::npos);
  EXPECT_NE(r.ToText().find("weighted F1"), std::string::npos);
}

TEST(SplitTrainTestTest, StratifiedCounts) {
  const auto w = Windows({{"a", 10}, {"b", 10}});
  const auto s = SplitTrainTest(w, 0.7, 1);
  EXPECT_EQ(CountOf(s.train, "a"), 7u);
  EXPECT_EQ(CountOf(s.test, "b"), 3u);
  const auto t = SplitTrainTest(w, 0.3, 1);
  EXPECT_EQ(t.train.size(), 6u);
  EXPECT_EQ(t.test.size(), 14u);
  EXPECT_EQ(SplitTrainTest(w, 0.7, 1).test, s.test);
  EXPECT_NE(SplitTrainTest(w, 0.7, 2).test, s.test);
}

TEST(SplitTrainTestTest, Errors) {
  EXPECT_THROW(SplitTrainTest(Windows({{"a", 1}, {"b", 5}}), 0.7, 0), ClassTooSmall);
  EXPECT_THROW(SplitTrainTest(Windows({{"a", 5}}), 1.0, 0), InvalidParameters);
  EXPECT_THROW(SplitTrainTest(Windows({{"a", 5}}), 0.0, 0), InvalidParameters);
}

TEST(DownsampleTest, ReducesToMedianOfOthers) {
  const auto w = Windows({{"sleeping", 1000}, {"a", 40}, {"b", 50}, {"c", 70}});
  const auto d = Downsample(w, {"sleeping"}, 3);
  EXPECT_EQ(CountOf(d, "sleeping"), 50u);
  EXPECT_EQ(CountOf(d, "a"), 40u);
  EXPECT_EQ(d.size(), 210u);
  EXPECT_EQ(Downsample(w, {"sleeping"}, 3), d);
  EXPECT_EQ(Downsample(w, {}, 3), w);
  EXPECT_TRUE(std::is_sorted(d.begin(), d.end(), [](const auto& x, const auto& y) {
    return x.window.index < y.window.index;
  }));
}

}  // namespace
}  // namespace xadl
