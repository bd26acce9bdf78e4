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

#include "xadl/archive.hpp"

#include <sstream>

#include "json.hpp"
#include "xadl/errors.hpp"

namespace xadl {

namespace {

using ojson = nlohmann::ordered_json;
using nlohmann::json;

Timestamp TimeField(const json& obj, const char* key, std::size_t line) {
  if (!obj.contains(key) || !obj[key].is_string()) {
    throw SchemaViolation("line " + std::to_string(line) + ": missing '" + key + "'");
  }
  auto ts = Timestamp::TryParse(obj[key].get<std::string>());
  if (!ts) throw SchemaViolation("line " + std::to_string(line) + ": invalid timestamp in '" + key + "'");
  return *ts;
}

std::string StrField(const json& obj, const char* key) {
  if (!obj.contains(key)) return {};
  return obj[key].is_string() ? obj[key].get<std::string>() : std::string();
}

std::size_t IndexField(const json& obj, std::size_t line) {
  if (!obj.contains("index") || !obj["index"].is_number_unsigned()) {
    throw SchemaViolation("line " + std::to_string(line) + ": missing window index");
  }
  return obj["index"].get<std::size_t>();
}

// Calls `fn(object, line_number)` for every non-blank line.
template <typename Fn>
void ForEachJsonLine(std::string_view text, Fn&& fn) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      throw SchemaViolation("line " + std::to_string(number) + ": " + e.what());
    }
    if (!obj.is_object()) throw SchemaViolation("line " + std::to_string(number) + ": not an object");
    fn(obj, number);
  }
}

}  // namespace

std::string WindowToJsonLine(const StateWindow& window) {
  ojson states = ojson::array();
  for (const auto& s : window.states) {
    states.push_back({{"property", s.property}, {"start", s.start.ToString()}, {"end", s.end.ToString()}});
  }
  ojson doc = {{"index", window.index},
               {"start", window.start.ToString()},
               {"end", window.end.ToString()},
               {"states", std::move(states)}};
  return doc.dump() + "\n";
}

std::string SerializeWindows(std::span<const StateWindow> windows) {
  std::string out;
  for (const auto& w : windows) out += WindowToJsonLine(w);
  return out;
}

std::vector<StateWindow> ParseWindows(std::string_view text) {
  std::vector<StateWindow> out;
  ForEachJsonLine(text, [&](const json& obj, std::size_t line) {
    StateWindow w;
    w.index = IndexField(obj, line);
    w.start = TimeField(obj, "start", line);
    w.end = TimeField(obj, "end", line);
    if (!obj.contains("states") || !obj["states"].is_array()) {
      throw SchemaViolation("line " + std::to_string(line) + ": missing states");
    }
    for (const auto& s : obj["states"]) {
      if (!s.is_object()) throw SchemaViolation("line " + std::to_string(line) + ": bad state");
      SemanticState st{StrField(s, "property"), TimeField(s, "start", line), TimeField(s, "end", line)};
      if (st.property.empty() || st.end < st.start) {
        throw SchemaViolation("line " + std::to_string(line) + ": invalid state");
      }
      w.states.push_back(std::move(st));
    }
    out.push_back(std::move(w));
  });
  return out;
}

std::string PredictionToJsonLine(const PredictionRecord& r) {
  ojson doc;
  doc["window"] = {{"index", r.window.index},
                   {"start", r.window.start.ToString()},
                   {"end", r.window.end.ToString()}};
  doc["status"] = std::string(ToString(r.status));
  doc["activity"] = r.predicted_activity;
  doc["explanation"] = r.explanation;
  doc["raw_model_output"] = r.raw_model_output;
  doc["prompt_fingerprint"] = r.prompt_fingerprint;
  doc["usage"] = {{"prompt", r.usage.prompt}, {"completion", r.usage.completion}};
  doc["error"] = r.error;
  return doc.dump() + "\n";
}

std::string SerializePredictions(std::span<const PredictionRecord> records) {
  std::string out;
  for (const auto& r : records) out += PredictionToJsonLine(r);
  return out;
}

std::vector<PredictionRecord> ParsePredictions(std::string_view text) {
  std::vector<PredictionRecord> out;
  ForEachJsonLine(text, [&](const json& obj, std::size_t line) {
    PredictionRecord r;
    if (!obj.contains("window") || !obj["window"].is_object()) {
      throw SchemaViolation("line " + std::to_string(line) + ": missing window");
    }
    const auto& w = obj["window"];
    r.window = {IndexField(w, line), TimeField(w, "start", line), TimeField(w, "end", line)};
    auto status = ParsePredictionStatus(StrField(obj, "status"));
    if (!status) throw SchemaViolation("line " + std::to_string(line) + ": unknown status");
    r.status = *status;
    r.predicted_activity = StrField(obj, "activity");
    r.explanation = StrField(obj, "explanation");
    r.raw_model_output = StrField(obj, "raw_model_output");
    r.prompt_fingerprint = StrField(obj, "prompt_fingerprint");
    r.error = StrField(obj, "error");
    if (obj.contains("usage") && obj["usage"].is_object()) {
      r.usage.prompt = obj["usage"].value("prompt", std::int64_t{0});
      r.usage.completion = obj["usage"].value("completion", std::int64_t{0});
    }
    if (r.status == PredictionStatus::kOk && r.predicted_activity.empty()) {
      throw SchemaViolation("line " + std::to_string(line) + ": ok record without activity");
    }
    out.push_back(std::move(r));
  });
  return out;
}

std::string SerializeUnpaired(std::span<const UnpairedEvent> unpaired) {
  std::string out = "timestamp,entity,status,reason\n";
  for (const auto& u : unpaired) {
    std::string reason = u.reason;
    if (reason.find_first_of(",\"") != std::string::npos) {
      std::string quoted = "\"";
      for (char c : reason) {
        if (c == '"') quoted += '"';
        quoted += c;
      }
      reason = quoted + "\"";
    }
    out += u.event.ts.ToString() + "," + u.event.entity + "," + u.event.status + "," + reason + "\n";
  }
  return out;
}

}  // namespace xadl
