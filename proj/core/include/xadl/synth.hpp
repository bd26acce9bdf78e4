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

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "xadl/backends.hpp"
#include "xadl/catalog.hpp"
#include "xadl/ingestion.hpp"
#include "xadl/model.hpp"
#include "xadl/prompts.hpp"

namespace xadl {

// Uniform range of whole seconds, inclusive.
struct SecondsRange {
  std::int64_t min = 0;
  std::int64_t max = 0;
};

// One scripted sensor pair fired inside an activity interval. Without a
// dwell the state covers the whole interval; otherwise it opens `offset`
// seconds in and lasts `dwell` seconds, cut at the interval end.
struct EventTemplate {
  std::string entity;
  std::string label;  // human-readable state label
  std::string property;  // defaults to the entity id
  std::string start_status = "On";
  std::string end_status = "Off";
  SecondsRange offset;
  std::optional<SecondsRange> dwell;
};

struct ScenarioActivity {
  std::string label;
  SecondsRange duration;
  std::vector<EventTemplate> templates;
};

// Scenario file:
//
//   {"start": "2024-03-04 08:00:00",
//    "duration_seconds": 86400,
//    "gapless": true,
//    "gap_seconds": [0, 0],
//    "layout": "...", "sensing": "...",
//    "activities": [
//      {"label": "sleeping", "duration_seconds": [3600, 7200],
//       "templates": [{"entity": "Bed", "label": "someone is lying in bed",
//                      "start_status": "Pressure", "end_status": "Released",
//                      "offset_seconds": [0, 0], "dwell_seconds": [600, 900]}]}]}
//
// "property", "start_status"/"end_status", "offset_seconds" and
// "dwell_seconds" are optional.
struct Scenario {
  Timestamp start;
  std::int64_t duration_seconds = 86400;
  bool gapless = true;
  SecondsRange gap;
  std::string layout;
  std::string sensing;
  std::vector<ScenarioActivity> activities;

  // Throws InvalidScenario.
  void Validate() const;
  static Scenario FromJson(std::string_view json_text);
  static Scenario Load(const std::string& path);
};

struct SyntheticDataset {
  std::vector<SemanticEvent> events;         // sorted by ts
  std::vector<GroundTruthInterval> truth;    // sorted by start
  SensorCatalog catalog;
  HomeProfile profile;
  // state label -> activity rules for the mock backend
  std::vector<RuleResponder::Rule> rules;
};

// Scripts activities back to back from scenario.start until the duration
// is used up; an activity never directly follows itself when there is a
// choice. The last interval is cut at the scenario end. Deterministic in
// (scenario, seed).
SyntheticDataset Generate(const Scenario& scenario, std::uint64_t seed);

}  // namespace xadl
