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

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "xadl/model.hpp"

namespace xadl {

// Heatmap-style explanation of a data-driven classifier: one row per
// sensor condition, each segment an interval in which it held, with the
// highest pixel intensity seen inside the segment.
struct HeatmapSegment {
  Timestamp start;
  Timestamp end;
  double max_intensity = 0.0;  // in [0, 1]
};

struct HeatmapRow {
  std::string feature;
  std::vector<HeatmapSegment> segments;  // sorted, non-overlapping
};

struct HeatmapExplanation {
  std::vector<HeatmapRow> rows;
};

// Throws SchemaViolation on unsorted/overlapping segments or intensities
// outside [0, 1].
void ValidateHeatmap(const HeatmapExplanation& hm);

struct HeatmapOptions {
  // Row is important when max_intensity > threshold; with `inclusive`,
  // when >= threshold.
  bool inclusive = false;
  // Keep every segment of an important row (default) or only the
  // segments that pass the threshold themselves.
  bool all_segments = true;
};

// Important rows become features; feature names go through `name_map` to
// state properties. Throws UnmappedFeature for any row whose feature has
// no mapping, UnknownActivity unless `predicted` is in `activities`.
AttributionSet HeatmapToAttributions(const HeatmapExplanation& hm, double threshold,
                                     std::string_view predicted, const ActivitySet& activities,
                                     const std::map<std::string, std::string, std::less<>>& name_map,
                                     const HeatmapOptions& options = {});

// Interchange document consumed by the explainer:
//
//   {"version": 1,
//    "predicted_activity": "preparing hot meal",
//    "window": ["2024-03-04 12:00:00", "2024-03-04 12:00:16"],
//    "features": [{"property": "StoveOn",
//                  "intervals": [["2024-03-04 12:00:02", "2024-03-04 12:00:09"]]}]}
//
// "window" may be omitted. Throws SchemaViolation.
AttributionSet LoadAttributionInterchange(std::string_view json_text);
std::string SaveAttributionInterchange(const AttributionSet& attrs);

// Reads a heatmap CSV dump, one segment per line:
//   feature,start,end,max_intensity
// A header line is allowed. Rows appear in first-seen feature order.
// Throws MalformedRow / SchemaViolation.
HeatmapExplanation ReadHeatmapCsv(std::string_view text);

}  // namespace xadl
