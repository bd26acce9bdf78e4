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

#include "xadl/pairing.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <tuple>

#include "oracles.hpp"

namespace xadl {
namespace {

const Timestamp kT0 = Timestamp::FromCivil(2024, 3, 4, 15, 0, 0);

std::vector<SemanticState> Sorted(std::vector<SemanticState> s) {
  std::sort(s.begin(), s.end(), [](const auto& a, const auto& b) {
    return std::tie(a.start, a.property, a.end) < std::tie(b.start, b.property, b.end);
  });
  return s;
}

TEST(PairEventsTest, SimplePair) {
  const auto cat = testing::TwoSwitchCatalog();
  const std::vector<SemanticEvent> ev{{"A", "On", kT0}, {"A", "Off", kT0 + Seconds(60)}};
  const auto r = PairEvents(ev, cat);
  ASSERT_EQ(r.states.size(), 1u);
  EXPECT_EQ(r.states[0], (SemanticState{"AOn", kT0, kT0 + Seconds(60)}));
  EXPECT_TRUE(r.unpaired.empty());
}

TEST(PairEventsTest, ZeroDurationStateRetained) {
  const auto cat = testing::TwoSwitchCatalog();
  const auto r = PairEvents(std::vector<SemanticEvent>{{"A", "On", kT0}, {"A", "Off", kT0}}, cat);
  ASSERT_EQ(r.states.size(), 1u);
  EXPECT_EQ(r.states[0].start, r.states[0].end);
}

TEST(PairEventsTest, DiagnosticsForOrphans) {
  const auto cat = testing::TwoSwitchCatalog();
  const std::vector<SemanticEvent> ev{{"A", "Off", kT0},
                                      {"A", "On", kT0 + Seconds(1)},
                                      {"A", "On", kT0 + Seconds(2)},
                                      {"A", "Off", kT0 + Seconds(3)},
                                      {"B", "On", kT0 + Seconds(4)}};
  const auto r = PairEvents(ev, cat);
  ASSERT_EQ(r.states.size(), 1u);
  EXPECT_EQ(r.states[0].start, kT0 + Seconds(2));
  ASSERT_EQ(r.unpaired.size(), 3u);
  EXPECT_EQ(r.unpaired[0].event, ev[0]);
  EXPECT_EQ(r.unpaired[1].event, ev[1]);
  EXPECT_EQ(r.unpaired[2].event, ev[4]);
}

TEST(PairEventsTest, CloseDanglingAtStreamEnd) {
  const auto cat = testing::TwoSwitchCatalog();
  const std::vector<SemanticEvent> ev{{"A", "On", kT0}, {"B", "On", kT0 + Seconds(9)}};
  PairingOptions opts;
  opts.close_dangling_at_stream_end = true;
  const auto r = PairEvents(ev, cat, opts);
  ASSERT_EQ(r.states.size(), 2u);
  EXPECT_EQ(r.states[0], (SemanticState{"AOn", kT0, kT0 + Seconds(9)}));
  EXPECT_TRUE(r.unpaired.empty());
}

TEST(PairEventsTest, MatchesOracleOnAllShortSequences) {
  const auto cat = testing::TwoSwitchCatalog();
  const SemanticEvent alphabet[] = {{"A", "On", {}}, {"A", "Off", {}}, {"B", "On", {}}, {"B", "Off", {}}};
  for (int len = 0; len <= 5; ++len) {
    int total = 1;
    for (int i = 0; i < len; ++i) total *= 4;
    for (int code = 0; code < total; ++code) {
      std::vector<SemanticEvent> ev;
      for (int i = 0, c = code; i < len; ++i, c /= 4) {
        SemanticEvent e = alphabet[c % 4];
        e.ts = kT0 + Seconds(i);
        ev.push_back(e);
      }
      const auto got = PairEvents(ev, cat);
      const auto want = testing::BruteForcePair(ev, cat);
      ASSERT_EQ(Sorted(got.states), want.states) << "code " << code << " len " << len;
      ASSERT_EQ(got.unpaired.size(), want.unpaired);
      ASSERT_EQ(got.states.size() * 2 + got.unpaired.size(), ev.size());
    }
  }
}

}  // namespace
}  // namespace xadl
