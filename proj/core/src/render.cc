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

#include "xadl/render.hpp"

#include <algorithm>
#include <map>
#include <vector>

#include "json.hpp"
#include "xadl/errors.hpp"

namespace xadl {
namespace {

struct Entry {
  std::string label;
  std::vector<Interval> intervals;
};

std::string Quote(std::string_view s) { return nlohmann::json(std::string(s)).dump(); }

std::string Pair(const Interval& iv) {
  return "[" + Quote(iv.start.TimeOfDay()) + ", " + Quote(iv.end.TimeOfDay()) + "]";
}

std::string Emit(const Interval& window, std::vector<Entry> entries) {
  for (auto& e : entries) {
    std::stable_sort(e.intervals.begin(), e.intervals.end(),
                     [](const Interval& a, const Interval& b) { return a.start < b.start; });
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    const Timestamp sa = a.intervals.empty() ? Timestamp{} : a.intervals.front().start;
    const Timestamp sb = b.intervals.empty() ? Timestamp{} : b.intervals.front().start;
    if (sa != sb) return sa < sb;
    return a.label < b.label;
  });
  std::string out = "{\n  " + Quote(kTimeWindowKey) + ": " + Pair(window);
  for (const auto& e : entries) {
    out += ",\n  " + Quote(e.label) + ": [";
    for (std::size_t i = 0; i < e.intervals.size(); ++i) {
      if (i > 0) out += ", ";
      out += Pair(e.intervals[i]);
    }
    out += "]";
  }
  out += "\n}\n";
  return out;
}

Timestamp Resolve(std::string_view time_of_day, Timestamp anchor) {
  auto tod = ParseTimeOfDay(time_of_day);
  if (!tod) throw SchemaViolation("invalid time of day '" + std::string(time_of_day) + "'");
  const Timestamp floor_anchor =
      Timestamp::FromMillis(anchor.millis() - ((anchor.millis() % 1000) + 1000) % 1000);
  const Timestamp midnight = floor_anchor - floor_anchor.SinceMidnight();
  Timestamp candidate = midnight + *tod;
  if (candidate < floor_anchor) candidate = candidate + std::chrono::hours(24);
  return candidate;
}

Interval ParsePair(const nlohmann::ordered_json& value, Timestamp anchor) {
  if (!value.is_array() || value.size() != 2 || !value[0].is_string() || !value[1].is_string()) {
    throw SchemaViolation("interval must be a [start, end] pair of strings");
  }
  Interval iv{Resolve(value[0].get<std::string>(), anchor),
              Resolve(value[1].get<std::string>(), anchor)};
  if (iv.end < iv.start) throw SchemaViolation("interval end precedes start");
  return iv;
}

}  // namespace

std::string RenderWindow(const StateWindow& window, const SensorCatalog& catalog) {
  std::map<std::string, Entry> by_property;
  for (const auto& s : window.states) {
    auto [it, inserted] = by_property.try_emplace(s.property);
    if (inserted) it->second.label = catalog.LabelFor(s.property);
    it->second.intervals.push_back({s.start, s.end});
  }
  std::vector<Entry> entries;
  for (auto& [_, e] : by_property) entries.push_back(std::move(e));
  return Emit({window.start, window.end}, std::move(entries));
}

std::string RenderAttributions(const AttributionSet& attrs, const Interval& window_interval,
                               const SensorCatalog& catalog) {
  std::map<std::string, Entry> by_property;
  for (const auto& f : attrs.features) {
    auto [it, inserted] = by_property.try_emplace(f.property);
    if (inserted) it->second.label = catalog.LabelFor(f.property);
    it->second.intervals.insert(it->second.intervals.end(), f.intervals.begin(),
                                f.intervals.end());
  }
  std::vector<Entry> entries;
  for (auto& [_, e] : by_property) entries.push_back(std::move(e));
  return Emit(window_interval, std::move(entries));
}

StateWindow ParseRenderedWindow(std::string_view json_text, const SensorCatalog& catalog,
                                Timestamp anchor) {
  nlohmann::ordered_json doc;
  try {
    doc = nlohmann::ordered_json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaViolation(std::string("not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains(std::string(kTimeWindowKey))) {
    throw SchemaViolation("missing \"Time window\"");
  }
  StateWindow w;
  const Interval bounds = ParsePair(doc[std::string(kTimeWindowKey)], anchor);
  w.start = bounds.start;
  w.end = bounds.end;
  for (const auto& [label, value] : doc.items()) {
    if (label == kTimeWindowKey) continue;
    auto property = catalog.PropertyForLabel(label);
    if (!property) throw MissingLabel("no property for label '" + label + "'");
    if (!value.is_array()) throw SchemaViolation("'" + label + "' must be a list of intervals");
    for (const auto& pair : value) {
      const Interval iv = ParsePair(pair, anchor);
      w.states.push_back({*property, iv.start, iv.end});
    }
  }
  std::sort(w.states.begin(), w.states.end(), [](const auto& a, const auto& b) {
    if (a.start != b.start) return a.start < b.start;
    if (a.property != b.property) return a.property < b.property;
    return a.end < b.end;
  });
  return w;
}

}  // namespace xadl
