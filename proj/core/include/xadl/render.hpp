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

#include <string>
#include <string_view>

#include "xadl/catalog.hpp"
#include "xadl/model.hpp"

namespace xadl {

inline constexpr std::string_view kTimeWindowKey = "Time window";

// Renders a window as the interchange JSON object:
//
//   {
//     "Time window": ["15:20:00", "15:40:00"],
//     "the fridge door is open": [["15:34:00", "15:35:00"]]
//   }
//
// One key per distinct property (its catalog label), valued by one
// [start, end] pair per state occurrence. Keys after "Time window" are
// ordered by earliest interval start, ties by label. Times are HH:MM:SS;
// the calendar date travels out of band. Throws MissingLabel.
std::string RenderWindow(const StateWindow& window, const SensorCatalog& catalog);

// Same layout for an attribution set over `window_interval`.
std::string RenderAttributions(const AttributionSet& attrs, const Interval& window_interval,
                               const SensorCatalog& catalog);

// Inverse of RenderWindow. Each time of day is resolved to the first
// instant at or after `anchor` (to the second), so windows crossing
// midnight come back with the right dates. Throws SchemaViolation /
// MissingLabel.
StateWindow ParseRenderedWindow(std::string_view json_text, const SensorCatalog& catalog,
                                Timestamp anchor);

}  // namespace xadl
