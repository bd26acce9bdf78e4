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

#include "xadl/synth.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "json.hpp"
#include "xadl/errors.hpp"
#include "xadl/io.hpp"
#include "xadl/rng.hpp"

namespace xadl {

namespace {

using nlohmann::json;

SecondsRange RangeFrom(const json& v, const char* what) {
  if (v.is_number_integer()) return {v.get<std::int64_t>(), v.get<std::int64_t>()};
  if (!v.is_array() || v.size() != 2 || !v[0].is_number_integer() || !v[1].is_number_integer()) {
    throw InvalidScenario(std::string(what) + " must be an integer or [min, max]");
  }
  return {v[0].get<std::int64_t>(), v[1].get<std::int64_t>()};
}

void CheckRange(const SecondsRange& r, const std::string& what, std::int64_t floor) {
  if (r.min < floor || r.max < r.min) {
    throw InvalidScenario(what + " must satisfy " + std::to_string(floor) + " <= min <= max");
  }
}

std::string StringField(const json& obj, const char* key, const std::string& fallback = {}) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_string()) throw InvalidScenario(std::string(key) + " must be a string");
  return obj[key].get<std::string>();
}

std::int64_t Draw(std::mt19937_64& rng, const SecondsRange& r) {
  return UniformInRange(rng, r.min, r.max);
}

}  // namespace

void Scenario::Validate() const {
  if (duration_seconds <= 0) throw InvalidScenario("duration_seconds must be positive");
  if (!gapless) CheckRange(gap, "gap_seconds", 0);
  if (activities.empty()) throw InvalidScenario("scenario has no activities");
  std::set<std::string> labels;
  for (const auto& a : activities) {
    if (a.label.empty()) throw InvalidScenario("activity label is empty");
    if (!labels.insert(NormalizeLabel(a.label)).second) {
      throw InvalidScenario("duplicate activity '" + a.label + "'");
    }
    CheckRange(a.duration, "duration_seconds of '" + a.label + "'", 1);
    if (a.templates.empty()) throw InvalidScenario("activity '" + a.label + "' has no templates");
    for (const auto& t : a.templates) {
      if (t.entity.empty() || t.label.empty()) {
        throw InvalidScenario("template in '" + a.label + "' needs an entity and a label");
      }
      if (t.start_status.empty() || t.end_status.empty() || t.start_status == t.end_status) {
        throw InvalidScenario("template '" + t.entity + "' needs two distinct statuses");
      }
      CheckRange(t.offset, "offset_seconds of '" + t.entity + "'", 0);
      if (t.dwell) CheckRange(*t.dwell, "dwell_seconds of '" + t.entity + "'", 0);
    }
  }
}

Scenario Scenario::FromJson(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw InvalidScenario(std::string("scenario is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw InvalidScenario("scenario must be an object");
  Scenario s;
  auto start = Timestamp::TryParse(StringField(doc, "start", "2024-01-01 00:00:00"));
  if (!start) throw InvalidScenario("invalid scenario start");
  s.start = *start;
  if (doc.contains("duration_seconds")) {
    if (!doc["duration_seconds"].is_number_integer()) {
      throw InvalidScenario("duration_seconds must be an integer");
    }
    s.duration_seconds = doc["duration_seconds"].get<std::int64_t>();
  }
  if (doc.contains("gapless")) {
    if (!doc["gapless"].is_boolean()) throw InvalidScenario("gapless must be a boolean");
    s.gapless = doc["gapless"].get<bool>();
  }
  if (doc.contains("gap_seconds")) s.gap = RangeFrom(doc["gap_seconds"], "gap_seconds");
  s.layout = StringField(doc, "layout");
  s.sensing = StringField(doc, "sensing");
  if (!doc.contains("activities") || !doc["activities"].is_array()) {
    throw InvalidScenario("scenario needs an activities list");
  }
  for (const auto& a : doc["activities"]) {
    if (!a.is_object()) throw InvalidScenario("activity must be an object");
    ScenarioActivity act;
    act.label = StringField(a, "label");
    if (!a.contains("duration_seconds")) {
      throw InvalidScenario("activity '" + act.label + "' needs duration_seconds");
    }
    act.duration = RangeFrom(a["duration_seconds"], "duration_seconds");
    if (a.contains("templates")) {
      if (!a["templates"].is_array()) throw InvalidScenario("templates must be a list");
      for (const auto& t : a["templates"]) {
        if (!t.is_object()) throw InvalidScenario("template must be an object");
        EventTemplate tmpl;
        tmpl.entity = StringField(t, "entity");
        tmpl.label = StringField(t, "label");
        tmpl.property = StringField(t, "property", tmpl.entity);
        tmpl.start_status = StringField(t, "start_status", "On");
        tmpl.end_status = StringField(t, "end_status", "Off");
        if (t.contains("offset_seconds")) tmpl.offset = RangeFrom(t["offset_seconds"], "offset_seconds");
        if (t.contains("dwell_seconds")) tmpl.dwell = RangeFrom(t["dwell_seconds"], "dwell_seconds");
        act.templates.push_back(std::move(tmpl));
      }
    }
    s.activities.push_back(std::move(act));
  }
  s.Validate();
  return s;
}

Scenario Scenario::Load(const std::string& path) { return FromJson(ReadFile(path)); }

SyntheticDataset Generate(const Scenario& scenario, std::uint64_t seed) {
  scenario.Validate();
  SyntheticDataset out;

  std::vector<std::string> labels;
  std::vector<EntityInfo> entities;
  std::map<std::string, std::size_t> entity_index;
  std::set<std::string> ruled;
  for (const auto& a : scenario.activities) {
    labels.push_back(a.label);
    for (const auto& t : a.templates) {
      auto [it, fresh] = entity_index.try_emplace(t.entity, entities.size());
      if (fresh) entities.push_back({t.entity, {}, {}});
      auto& info = entities[it->second];
      const bool known = std::any_of(info.pairings.begin(), info.pairings.end(), [&](const auto& p) {
        return p.start == t.start_status && p.end == t.end_status && p.property == t.property &&
               p.label == t.label;
      });
      if (!known) {
        info.statuses.push_back(t.start_status);
        info.statuses.push_back(t.end_status);
        info.pairings.push_back({t.start_status, t.end_status, t.property, t.label});
      }
      if (ruled.insert(t.label).second) out.rules.push_back({t.label, a.label});
    }
  }
  try {
    out.catalog = SensorCatalog(std::move(entities));
    out.profile.activities = ActivitySet(labels);
  } catch (const Error& e) {
    throw InvalidScenario(std::string("scenario sensors are inconsistent: ") + e.what());
  }
  out.profile.layout = scenario.layout.empty()
                           ? "A single-occupant home with a kitchen, a living room, a bedroom and a bathroom."
                           : scenario.layout;
  out.profile.sensing = scenario.sensing.empty()
                            ? "Binary environmental sensors report when a device or furniture item changes state."
                            : scenario.sensing;

  std::mt19937_64 rng(seed);
  const Timestamp end = scenario.start + Seconds(scenario.duration_seconds);
  Timestamp t = scenario.start;
  std::optional<std::size_t> previous;
  const std::size_t n = scenario.activities.size();
  while (t < end) {
    std::size_t pick = UniformIndex(rng, previous && n > 1 ? n - 1 : n);
    if (previous && n > 1 && pick >= *previous) ++pick;
    const auto& act = scenario.activities[pick];
    const Timestamp stop = std::min(end, t + Seconds(Draw(rng, act.duration)));
    out.truth.push_back({act.label, t, stop});
    for (const auto& tmpl : act.templates) {
      Timestamp on = t;
      Timestamp off = stop;
      if (tmpl.dwell) {
        on = std::min(stop, t + Seconds(Draw(rng, tmpl.offset)));
        off = std::min(stop, on + Seconds(Draw(rng, *tmpl.dwell)));
      }
      out.events.push_back({tmpl.entity, tmpl.start_status, on});
      out.events.push_back({tmpl.entity, tmpl.end_status, off});
    }
    previous = pick;
    t = stop;
    if (!scenario.gapless) t = t + Seconds(Draw(rng, scenario.gap));
  }
  std::stable_sort(out.events.begin(), out.events.end(),
                   [](const SemanticEvent& a, const SemanticEvent& b) { return a.ts < b.ts; });
  return out;
}

}  // namespace xadl
