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
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "xadl/catalog.hpp"
#include "xadl/model.hpp"

namespace xadl {

// Supported on-disk layouts.
//
//   generic-csv  events: timestamp,entity,status
//                truth:  start,end,activity
//   uci-adl      events: start<TAB>end<TAB>location<TAB>type<TAB>place
//                truth:  start<TAB>end<TAB>activity
//                (comma-separated rows are accepted too; the two header
//                lines of the published files are skipped)
//   marble       events: ts_ms,sensor_id,status[,subject]
//                truth:  activity,start_ms,end_ms[,subject]
//
// Timestamps are "YYYY-MM-DD HH:MM:SS[.fff]" except in marble, which uses
// epoch milliseconds.
enum class DatasetFormat { kUciAdl, kMarble, kGenericCsv };

std::optional<DatasetFormat> ParseDatasetFormat(std::string_view name);
std::string_view ToString(DatasetFormat format);

struct GroundTruthInterval {
  std::string activity;
  Timestamp start;
  Timestamp end;

  bool operator==(const GroundTruthInterval&) const = default;
};

// Parses an event log into events sorted by timestamp (stable for ties).
// UCI-ADL interval rows explode into the entity's opening and closing
// events. Throws MalformedRow / UnknownEntity.
std::vector<SemanticEvent> ParseEventLog(std::string_view text, DatasetFormat format,
                                         const SensorCatalog& catalog);

struct TruthOptions {
  // Dataset labels dropped before validation, compared after
  // NormalizeLabel (e.g. "toileting").
  std::set<std::string> excluded;
  // Dataset label -> activity label, applied before validation; keys are
  // compared after NormalizeLabel.
  std::map<std::string, std::string> aliases;
};

// Parses annotated activity intervals, sorted by start. Overlaps are kept.
// Throws MalformedRow / UnknownActivity.
std::vector<GroundTruthInterval> ParseGroundTruth(std::string_view text,
                                                  DatasetFormat format,
                                                  const ActivitySet& activities,
                                                  const TruthOptions& options = {});

// generic-csv writers; ParseEventLog/ParseGroundTruth read them back.
std::string SerializeEvents(std::span<const SemanticEvent> events);
std::string SerializeGroundTruth(std::span<const GroundTruthInterval> truth);

struct Sample {
  Timestamp ts;
  double value = 0.0;
};

// Turns a continuous signal into Start/End events of `property`. A sample
// counts as "above" when value > threshold. A series that begins above the
// threshold emits Start at its first sample.
std::vector<SemanticEvent> ThresholdAdapter(std::span<const Sample> series,
                                            double threshold,
                                            const std::string& property);

struct LabeledWindow {
  StateWindow window;
  std::string activity;

  bool operator==(const LabeledWindow&) const = default;
};

struct LabelingResult {
  std::vector<LabeledWindow> labeled;
  std::size_t dropped = 0;  // windows overlapping no truth interval
};

// Labels each window with the truth interval of maximal overlap; ties go
// to the earlier-starting interval. Throws EmptyInput if `truth` is empty.
LabelingResult LabelWindows(std::vector<StateWindow> windows,
                            std::span<const GroundTruthInterval> truth);

}  // namespace xadl
