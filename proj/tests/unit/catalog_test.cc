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

#include "xadl/catalog.hpp"

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "xadl/errors.hpp"

namespace xadl {
namespace {

constexpr const char* kCatalog = R"({"entities": {
  "FridgeDoor": {"label": "the fridge door is open", "start": "Opened", "end": "Closed"},
  "Stove": {"statuses": ["On", "Off"],
            "pairings": [{"start": "On", "end": "Off", "property": "StoveOn",
                          "label": "the stove is on"}]}}})";

TEST(SensorCatalogTest, BothEntityForms) {
  const auto c = SensorCatalog::FromJson(kCatalog);
  ASSERT_NE(c.FindEntity("FridgeDoor"), nullptr);
  EXPECT_EQ(c.LabelFor("FridgeDoor"), "the fridge door is open");
  EXPECT_EQ(c.LabelFor("StoveOn"), "the stove is on");
  EXPECT_EQ(c.PropertyForLabel("the stove is on"), "StoveOn");
  EXPECT_EQ(c.ResolveStatus("Stove", "on"), "On");
  EXPECT_FALSE(c.ResolveStatus("Stove", "Burning"));
  ASSERT_NE(c.OpenedBy("Stove", "On"), nullptr);
  EXPECT_EQ(c.OpenedBy("Stove", "Off"), nullptr);
  EXPECT_EQ(c.ClosedBy("Stove", "Off"), c.OpenedBy("Stove", "On"));
  EXPECT_THROW(c.LabelFor("Nope"), MissingLabel);
}

TEST(SensorCatalogTest, JsonRoundTrip) {
  const auto c = SensorCatalog::FromJson(kCatalog);
  const auto again = SensorCatalog::FromJson(c.ToJson());
  EXPECT_EQ(again.ToJson(), c.ToJson());
  EXPECT_EQ(again.LabelFor("StoveOn"), "the stove is on");
}

TEST(SensorCatalogTest, RejectsInvalidDefinitions) {
  EXPECT_THROW(SensorCatalog::FromJson("[]"), CatalogError);
  EXPECT_THROW(SensorCatalog::FromJson(R"({"entities": {"A": {"label": "x", "start": "On", "end": "On"}}})"),
               CatalogError);
  // Duplicate labels across entities.
  EXPECT_THROW(SensorCatalog::FromJson(R"({"entities": {
      "A": {"label": "x", "start": "On", "end": "Off"},
      "B": {"label": "x", "start": "On", "end": "Off"}}})"),
               CatalogError);
  // Status declared but never paired.
  EXPECT_THROW(SensorCatalog::FromJson(R"({"entities": {"A": {"statuses": ["On", "Off", "Dim"],
      "pairings": [{"start": "On", "end": "Off", "property": "AOn", "label": "a"}]}}})"),
               CatalogError);
}

TEST(SensorCatalogTest, ProgrammaticConstruction) {
  const auto c = testing::TwoSwitchCatalog();
  EXPECT_TRUE(c.HasProperty("AOn"));
  EXPECT_FALSE(c.HasProperty("COn"));
  EXPECT_EQ(c.entities().size(), 2u);
}

}  // namespace
}  // namespace xadl
