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

#include "xadl/extract.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <optional>

#include "json.hpp"
#include "json_scan.hpp"
#include "xadl/errors.hpp"

namespace xadl {
namespace {

bool IsWordChar(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

std::string_view TrimView(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string Lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool BoundaryAt(std::string_view text, std::size_t pos, std::size_t len) {
  const bool left = pos == 0 || !IsWordChar(text[pos - 1]);
  const bool right = pos + len >= text.size() || !IsWordChar(text[pos + len]);
  return left && right;
}

// Strips separators and emphasis markers between a label and its rationale.
std::string Rationale(std::string_view rest) {
  while (!rest.empty() && (std::isspace(static_cast<unsigned char>(rest.front())) ||
                           rest.front() == '*' || rest.front() == '"' || rest.front() == '\'' ||
                           rest.front() == ':' || rest.front() == ',' || rest.front() == '.' ||
                           rest.front() == '-')) {
    rest.remove_prefix(1);
  }
  return std::string(TrimView(rest));
}

std::optional<Extraction> FromEnvelope(std::string_view raw, const ActivitySet& activities,
                                       ExtractionMode mode) {
  const auto spans = internal::TopLevelObjects(raw);
  for (auto it = spans.rbegin(); it != spans.rend(); ++it) {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(*it);
    } catch (const nlohmann::json::parse_error&) {
      continue;
    }
    if (!doc.is_object()) continue;
    const bool has_activity = doc.contains("activity") && doc["activity"].is_string();
    const bool has_explanation = doc.contains("explanation") && doc["explanation"].is_string();
    if (!has_activity && !has_explanation) continue;
    if (mode == ExtractionMode::kE2e && !has_activity) return std::nullopt;

    Extraction out;
    out.from_envelope = true;
    if (doc.contains("reasoning") && doc["reasoning"].is_string()) {
      out.reasoning = doc["reasoning"].get<std::string>();
    }
    if (mode == ExtractionMode::kE2e) {
      const std::string stated = doc["activity"].get<std::string>();
      auto canonical = activities.Find(stated);
      if (!canonical) {
        throw HallucinatedLabel("stated activity '" + stated + "' is not a candidate activity");
      }
      out.activity = *canonical;
    }
    if (has_explanation) out.explanation = std::string(TrimView(doc["explanation"].get<std::string>()));
    if (out.explanation.empty()) throw MissingExplanation("envelope carries no explanation");
    return out;
  }
  return std::nullopt;
}

struct LabelMatch {
  std::size_t label_index;
  std::size_t pos;
  std::size_t len;
};

// Longest label that the lowercase text starts with at `pos`.
std::optional<LabelMatch> LongestPrefixLabel(std::string_view lower, std::size_t pos,
                                             const std::vector<std::string>& labels) {
  std::optional<LabelMatch> best;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const std::string& l = labels[i];
    if (lower.compare(pos, l.size(), l) == 0 && BoundaryAt(lower, pos, l.size()) &&
        (!best || l.size() > best->len)) {
      best = LabelMatch{i, pos, l.size()};
    }
  }
  return best;
}

std::string StatedPhrase(std::string_view rest) {
  rest = TrimView(rest);
  // Emphasized all-caps run: "DOING LAUNDRY because ..."
  std::size_t caps_end = 0;
  while (caps_end < rest.size() &&
         (std::isupper(static_cast<unsigned char>(rest[caps_end])) || rest[caps_end] == ' ' ||
          rest[caps_end] == '_' || rest[caps_end] == '-')) {
    ++caps_end;
  }
  std::string_view caps = TrimView(rest.substr(0, caps_end));
  if (caps.size() > 1) return std::string(caps);
  std::size_t end = rest.size();
  for (std::string_view stop : {" because", ".", ",", "\n", " since", " as "}) {
    end = std::min(end, rest.find(stop));
  }
  return std::string(TrimView(rest.substr(0, end)));
}

Extraction FromFreeText(std::string_view raw, const ActivitySet& activities) {
  const std::string lower = Lower(raw);
  std::vector<std::string> labels;
  for (const auto& l : activities.labels()) labels.push_back(NormalizeLabel(l));

  static constexpr std::array<std::string_view, 4> kCues = {
      "predicted the activity of", "predicted the activity", "predicted activity", "activity:"};
  for (std::string_view cue : kCues) {
    const std::size_t at = lower.find(cue);
    if (at == std::string::npos) continue;
    std::size_t pos = at + cue.size();
    while (pos < lower.size() && (std::isspace(static_cast<unsigned char>(lower[pos])) ||
                                  lower[pos] == '*' || lower[pos] == ':' || lower[pos] == '"' ||
                                  lower[pos] == '\'')) {
      ++pos;
    }
    if (auto m = LongestPrefixLabel(lower, pos, labels)) {
      Extraction out;
      out.activity = activities.labels()[m->label_index];
      if (Rationale(raw.substr(m->pos + m->len)).empty()) {
        throw MissingExplanation("no rationale follows the activity");
      }
      out.explanation = std::string(TrimView(raw));
      return out;
    }
    const std::string stated = StatedPhrase(raw.substr(pos));
    throw HallucinatedLabel("stated activity '" + stated + "' is not a candidate activity");
  }

  std::optional<LabelMatch> best;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    for (std::size_t p = lower.find(labels[i]); p != std::string::npos;
         p = lower.find(labels[i], p + 1)) {
      if (!BoundaryAt(lower, p, labels[i].size())) continue;
      if (!best || labels[i].size() > best->len ||
          (labels[i].size() == best->len && p < best->pos)) {
        best = LabelMatch{i, p, labels[i].size()};
      }
      break;
    }
  }
  if (!best) throw UnparseableOutput("no candidate activity found in model output");
  Extraction out;
  out.activity = activities.labels()[best->label_index];
  out.explanation = std::string(TrimView(raw));
  return out;
}

}  // namespace

std::string RenderEnvelope(std::string_view activity, std::string_view explanation,
                           std::string_view reasoning) {
  nlohmann::ordered_json doc;
  if (!activity.empty()) doc["activity"] = std::string(activity);
  doc["explanation"] = std::string(explanation);
  if (!reasoning.empty()) doc["reasoning"] = std::string(reasoning);
  return doc.dump();
}

Extraction Extract(std::string_view raw, const ActivitySet& activities, ExtractionMode mode) {
  raw = TrimView(raw);
  if (raw.empty()) throw UnparseableOutput("model output is empty");
  if (auto env = FromEnvelope(raw, activities, mode)) return *env;
  if (mode == ExtractionMode::kExplainer) {
    return Extraction{{}, std::string(raw), {}, false};
  }
  return FromFreeText(raw, activities);
}

}  // namespace xadl
