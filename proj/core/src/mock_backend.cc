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

#include <algorithm>
#include <map>

#include "json.hpp"
#include "json_scan.hpp"
#include "xadl/backends.hpp"
#include "xadl/errors.hpp"
#include "xadl/extract.hpp"
#include "xadl/io.hpp"
#include "xadl/prompts.hpp"
#include "xadl/render.hpp"

namespace xadl {
namespace {

constexpr std::string_view kPredictedPrefix = "Predicted activity:";

std::int64_t SecondsOfDay(const std::string& hms) {
  auto tod = ParseTimeOfDay(hms);
  if (!tod) return 0;
  return std::chrono::duration_cast<std::chrono::seconds>(*tod).count();
}

struct Tally {
  std::string label;
  std::int64_t seconds = 0;
  std::int64_t first_start = 0;  // seconds after the window start
};

// Per-label totals from the first window JSON object in `user`.
std::vector<Tally> TallyWindow(std::string_view user) {
  std::vector<Tally> tallies;
  for (auto span : internal::TopLevelObjects(user)) {
    nlohmann::ordered_json doc;
    try {
      doc = nlohmann::ordered_json::parse(span);
    } catch (const nlohmann::json::parse_error&) {
      continue;
    }
    if (!doc.is_object() || !doc.contains(std::string(kTimeWindowKey))) continue;
    const std::int64_t window_start = SecondsOfDay(doc[std::string(kTimeWindowKey)][0]);
    for (const auto& [label, value] : doc.items()) {
      if (label == kTimeWindowKey || !value.is_array()) continue;
      Tally t{label, 0, INT64_MAX};
      for (const auto& pair : value) {
        const std::int64_t s = SecondsOfDay(pair[0]);
        const std::int64_t e = SecondsOfDay(pair[1]);
        t.seconds += ((e - s) % 86400 + 86400) % 86400;
        t.first_start = std::min(t.first_start, ((s - window_start) % 86400 + 86400) % 86400);
      }
      tallies.push_back(std::move(t));
    }
    break;
  }
  return tallies;
}

}  // namespace

void MockBackend::AddFixture(const CompletionRequest& request, Completion completion) {
  fixtures_[RequestDigest(request)] = std::move(completion);
}

BackendReply MockBackend::Send(const CompletionRequest& request) {
  BackendReply reply;
  if (auto it = fixtures_.find(RequestDigest(request)); it != fixtures_.end()) {
    reply.completion = it->second;
    return reply;
  }
  if (responder_) {
    reply.completion = responder_(request);
    return reply;
  }
  reply.outcome = AttemptOutcome::kFatal;
  reply.detail = "mock backend has no fixture for request " + RequestDigest(request);
  return reply;
}

RuleResponder::RuleResponder(std::vector<Rule> rules, std::optional<std::string> fallback)
    : rules_(std::move(rules)), fallback_(std::move(fallback)) {}

RuleResponder RuleResponder::FromJson(std::string_view json_text) {
  try {
    const auto doc = nlohmann::json::parse(json_text);
    std::vector<Rule> rules;
    for (const auto& r : doc.at("rules")) {
      rules.push_back({r.at("label").get<std::string>(), r.at("activity").get<std::string>()});
    }
    std::optional<std::string> fallback;
    if (doc.contains("fallback_activity")) fallback = doc["fallback_activity"].get<std::string>();
    return RuleResponder(std::move(rules), std::move(fallback));
  } catch (const nlohmann::json::exception& e) {
    throw SchemaViolation(std::string("malformed mock rules: ") + e.what());
  }
}

RuleResponder RuleResponder::Load(const std::string& path) { return FromJson(ReadFile(path)); }

std::string RuleResponder::ToJson() const {
  nlohmann::ordered_json doc;
  doc["rules"] = nlohmann::ordered_json::array();
  for (const auto& r : rules_) doc["rules"].push_back({{"label", r.label}, {"activity", r.activity}});
  if (fallback_) doc["fallback_activity"] = *fallback_;
  return doc.dump(2) + "\n";
}

Completion RuleResponder::operator()(const CompletionRequest& request) const {
  const std::vector<Tally> tallies = TallyWindow(request.user);
  std::string text;

  if (auto pos = request.user.find(kPredictedPrefix); pos != std::string::npos) {
    const std::size_t from = pos + kPredictedPrefix.size();
    const std::size_t eol = request.user.find('\n', from);
    std::string predicted = NormalizeLabel(request.user.substr(from, eol - from));
    std::string because;
    for (std::size_t i = 0; i < tallies.size(); ++i) {
      because += (i == 0 ? "" : (i + 1 == tallies.size() ? " and " : ", ")) + tallies[i].label;
    }
    text = RenderEnvelope({}, "The classifier predicted " + predicted + " because " +
                                  (because.empty() ? "no notable sensor states" : because) +
                                  " were observed during the window.");
  } else {
    const Tally* best = nullptr;
    const Rule* best_rule = nullptr;
    for (const auto& t : tallies) {
      auto rule = std::find_if(rules_.begin(), rules_.end(),
                               [&](const Rule& r) { return r.label == t.label; });
      if (rule == rules_.end()) continue;
      const bool better =
          best == nullptr || t.seconds > best->seconds ||
          (t.seconds == best->seconds &&
           (t.first_start < best->first_start ||
            (t.first_start == best->first_start && t.label < best->label)));
      if (better) {
        best = &t;
        best_rule = &*rule;
      }
    }
    if (best_rule != nullptr) {
      text = "Step 1: the longest state in the window is \"" + best->label + "\" (" +
             std::to_string(best->seconds) + " s).\n" +
             RenderEnvelope(best_rule->activity,
                            "The resident was most likely " + best_rule->activity + " because " +
                                best->label + " for most of the window.",
                            "dominant state: " + best->label);
    } else if (fallback_) {
      text = RenderEnvelope(*fallback_, "No sensor state points to a specific activity.",
                            "no rule matched");
    } else {
      text = "I cannot determine the activity from this window.";
    }
  }
  return Completion{text, {static_cast<std::int64_t>(EstimateTokens(request.system) +
                                                     EstimateTokens(request.user)),
                           static_cast<std::int64_t>(EstimateTokens(text))}};
}

}  // namespace xadl
