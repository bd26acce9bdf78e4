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

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

#include "json.hpp"
#include "xadl/errors.hpp"

namespace xadl {

void ValidateHeatmap(const HeatmapExplanation& hm) {
  std::set<std::string, std::less<>> seen;
  for (const auto& row : hm.rows) {
    if (!seen.insert(row.feature).second) {
      throw SchemaViolation("duplicate heatmap row '" + row.feature + "'");
    }
    for (std::size_t i = 0; i < row.segments.size(); ++i) {
      const auto& s = row.segments[i];
      if (s.end < s.start) throw SchemaViolation("segment end precedes start in '" + row.feature + "'");
      if (!(s.max_intensity >= 0.0 && s.max_intensity <= 1.0)) {
        throw SchemaViolation("intensity outside [0, 1] in '" + row.feature + "'");
      }
      if (i > 0 && s.start < row.segments[i - 1].end) {
        throw SchemaViolation("segments of '" + row.feature + "' overlap or are unsorted");
      }
    }
  }
}

AttributionSet HeatmapToAttributions(const HeatmapExplanation& hm, double threshold,
                                     std::string_view predicted, const ActivitySet& activities,
                                     const std::map<std::string, std::string, std::less<>>& name_map,
                                     const HeatmapOptions& options) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw InvalidParameters("threshold must be in [0, 1]");
  }
  auto canonical = activities.Find(predicted);
  if (!canonical) {
    throw UnknownActivity("predicted activity '" + std::string(predicted) + "' is not a candidate");
  }
  ValidateHeatmap(hm);
  const auto passes = [&](double v) { return options.inclusive ? v >= threshold : v > threshold; };

  AttributionSet out;
  out.predicted_activity = *canonical;
  std::set<std::string, std::less<>> properties;
  for (const auto& row : hm.rows) {
    auto mapped = name_map.find(row.feature);
    if (mapped == name_map.end()) {
      throw UnmappedFeature("heatmap feature '" + row.feature + "' has no state property");
    }
    const bool important = std::any_of(row.segments.begin(), row.segments.end(),
                                       [&](const HeatmapSegment& s) { return passes(s.max_intensity); });
    if (!important) continue;
    if (!properties.insert(mapped->second).second) {
      throw SchemaViolation("two important heatmap rows map to property '" + mapped->second + "'");
    }
    AttributedFeature feature{mapped->second, {}};
    for (const auto& s : row.segments) {
      if (options.all_segments || passes(s.max_intensity)) feature.intervals.push_back({s.start, s.end});
    }
    out.features.push_back(std::move(feature));
  }
  return out;
}

namespace {

Interval ParseIntervalJson(const nlohmann::json& v) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_string() || !v[1].is_string()) {
    throw SchemaViolation("interval must be a [start, end] pair of timestamps");
  }
  auto start = Timestamp::TryParse(v[0].get<std::string>());
  auto end = Timestamp::TryParse(v[1].get<std::string>());
  if (!start || !end) throw SchemaViolation("invalid timestamp in interval");
  return {*start, *end};
}

}  // namespace

AttributionSet LoadAttributionInterchange(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaViolation(std::string("not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw SchemaViolation("interchange document must be an object");
  if (doc.value("version", 1) != 1) throw SchemaViolation("unsupported interchange version");
  if (!doc.contains("predicted_activity") || !doc["predicted_activity"].is_string() ||
      doc["predicted_activity"].get<std::string>().empty()) {
    throw SchemaViolation("missing predicted_activity");
  }
  if (!doc.contains("features") || !doc["features"].is_array()) {
    throw SchemaViolation("missing features list");
  }
  AttributionSet attrs;
  attrs.predicted_activity = doc["predicted_activity"].get<std::string>();
  if (doc.contains("window")) attrs.window = ParseIntervalJson(doc["window"]);
  for (const auto& f : doc["features"]) {
    if (!f.is_object() || !f.contains("property") || !f["property"].is_string() ||
        !f.contains("intervals") || !f["intervals"].is_array()) {
      throw SchemaViolation("feature needs a property and an intervals list");
    }
    AttributedFeature feature{f["property"].get<std::string>(), {}};
    for (const auto& iv : f["intervals"]) feature.intervals.push_back(ParseIntervalJson(iv));
    attrs.features.push_back(std::move(feature));
  }
  ValidateAttributionSet(attrs);
  return attrs;
}

std::string SaveAttributionInterchange(const AttributionSet& attrs) {
  const auto pair = [](const Interval& iv) {
    return nlohmann::ordered_json::array({iv.start.ToString(), iv.end.ToString()});
  };
  nlohmann::ordered_json doc;
  doc["version"] = 1;
  doc["predicted_activity"] = attrs.predicted_activity;
  if (attrs.window) doc["window"] = pair(*attrs.window);
  doc["features"] = nlohmann::ordered_json::array();
  for (const auto& f : attrs.features) {
    nlohmann::ordered_json intervals = nlohmann::ordered_json::array();
    for (const auto& iv : f.intervals) intervals.push_back(pair(iv));
    doc["features"].push_back({{"property", f.property}, {"intervals", std::move(intervals)}});
  }
  return doc.dump(2) + "\n";
}

HeatmapExplanation ReadHeatmapCsv(std::string_view text) {
  HeatmapExplanation hm;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos || line[0] == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    for (std::string f; std::getline(ss, f, ',');) {
      const auto b = f.find_first_not_of(" \t");
      const auto e = f.find_last_not_of(" \t");
      fields.push_back(b == std::string::npos ? "" : f.substr(b, e - b + 1));
    }
    if (number == 1 && !fields.empty() && fields[0] == "feature") continue;
    if (fields.size() != 4) {
      throw MalformedRow(number, "expected 4 columns, got " + std::to_string(fields.size()));
    }
    auto start = Timestamp::TryParse(fields[1]);
    auto end = Timestamp::TryParse(fields[2]);
    if (!start || !end) throw MalformedRow(number, "invalid timestamp");
    double intensity = 0.0;
    const auto [ptr, ec] = std::from_chars(fields[3].data(), fields[3].data() + fields[3].size(), intensity);
    if (ec != std::errc() || ptr != fields[3].data() + fields[3].size()) {
      throw MalformedRow(number, "invalid intensity '" + fields[3] + "'");
    }
    auto row = std::find_if(hm.rows.begin(), hm.rows.end(),
                            [&](const HeatmapRow& r) { return r.feature == fields[0]; });
    if (row == hm.rows.end()) {
      hm.rows.push_back({fields[0], {}});
      row = std::prev(hm.rows.end());
    }
    row->segments.push_back({*start, *end, intensity});
  }
  for (auto& row : hm.rows) {
    std::stable_sort(row.segments.begin(), row.segments.end(),
                     [](const auto& a, const auto& b) { return a.start < b.start; });
  }
  ValidateHeatmap(hm);
  return hm;
}

}  // namespace xadl
