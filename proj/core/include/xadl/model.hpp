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

#include <chrono>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace xadl {

using Duration = std::chrono::milliseconds;

// A wall-clock instant at millisecond resolution. The calendar date is
// always kept, even where only the time of day is rendered.
class Timestamp {
 public:
  using TimePoint = std::chrono::sys_time<Duration>;

  constexpr Timestamp() = default;
  constexpr explicit Timestamp(TimePoint tp) : tp_(tp) {}

  static constexpr Timestamp FromMillis(std::int64_t ms) {
    return Timestamp(TimePoint(Duration(ms)));
  }
  static Timestamp FromCivil(int year, unsigned month, unsigned day,
                             int hour = 0, int minute = 0, int second = 0,
                             int millis = 0);

  // Accepts "YYYY-MM-DD HH:MM:SS", an optional ".fff" fraction and 'T' as
  // the date/time separator.
  static std::optional<Timestamp> TryParse(std::string_view text);
  // Like TryParse, throws InvalidParameters on failure.
  static Timestamp Parse(std::string_view text);

  constexpr std::int64_t millis() const { return tp_.time_since_epoch().count(); }
  constexpr TimePoint time_point() const { return tp_; }

  // "YYYY-MM-DD HH:MM:SS", with ".fff" appended only when non-zero.
  std::string ToString() const;
  // "HH:MM:SS", sub-second part truncated.
  std::string TimeOfDay() const;
  // Milliseconds elapsed since the midnight starting this instant's day.
  Duration SinceMidnight() const;

  constexpr Timestamp operator+(Duration d) const { return Timestamp(tp_ + d); }
  constexpr Timestamp operator-(Duration d) const { return Timestamp(tp_ - d); }
  constexpr Duration operator-(Timestamp other) const { return tp_ - other.tp_; }

  constexpr auto operator<=>(const Timestamp&) const = default;

 private:
  TimePoint tp_{};
};

// Parses "HH:MM:SS" into an offset from midnight.
std::optional<Duration> ParseTimeOfDay(std::string_view text);

constexpr Duration Seconds(std::int64_t s) { return std::chrono::seconds(s); }

struct Interval {
  Timestamp start;
  Timestamp end;

  bool operator==(const Interval&) const = default;
};

// One timestamped entity/status observation; ⟨entity, status, ts⟩.
struct SemanticEvent {
  std::string entity;
  std::string status;
  Timestamp ts;

  bool operator==(const SemanticEvent&) const = default;
};

// Property `property` holds continuously over [start, end].
struct SemanticState {
  std::string property;
  Timestamp start;
  Timestamp end;

  bool operator==(const SemanticState&) const = default;
};

// A fixed-length window and the states clipped into it, sorted by
// (start, property).
struct StateWindow {
  std::size_t index = 0;
  Timestamp start;
  Timestamp end;
  std::vector<SemanticState> states;

  bool empty() const { return states.empty(); }
  bool operator==(const StateWindow&) const = default;
};

// Trims surrounding whitespace and lowercases ASCII.
std::string NormalizeLabel(std::string_view label);

// Ordered candidate activity labels. Labels must be non-empty and distinct
// after NormalizeLabel.
class ActivitySet {
 public:
  ActivitySet() = default;
  explicit ActivitySet(std::vector<std::string> labels);

  // Returns the canonical spelling of `label` if it is a member.
  std::optional<std::string> Find(std::string_view label) const;
  bool Contains(std::string_view label) const { return Find(label).has_value(); }

  const std::vector<std::string>& labels() const { return labels_; }
  std::size_t size() const { return labels_.size(); }
  bool empty() const { return labels_.empty(); }
  // Position of `label` in the set, if present.
  std::optional<std::size_t> IndexOf(std::string_view label) const;

 private:
  std::vector<std::string> labels_;
  std::vector<std::string> normalized_;
};

struct TokenUsage {
  std::int64_t prompt = 0;
  std::int64_t completion = 0;

  bool operator==(const TokenUsage&) const = default;
};

enum class PredictionStatus {
  kOk,
  kHallucinated,
  kUnparseable,
  kMissingExplanation,
  kProviderError,
  kSkipped,
};

std::string_view ToString(PredictionStatus status);
std::optional<PredictionStatus> ParsePredictionStatus(std::string_view text);

struct WindowRef {
  std::size_t index = 0;
  Timestamp start;
  Timestamp end;

  bool operator==(const WindowRef&) const = default;
};

struct PredictionRecord {
  WindowRef window;
  PredictionStatus status = PredictionStatus::kOk;
  std::string predicted_activity;  // empty unless status is kOk
  std::string explanation;
  std::string raw_model_output;
  std::string prompt_fingerprint;
  TokenUsage usage;
  std::string error;  // populated for failures

  bool operator==(const PredictionRecord&) const = default;
};

struct AttributedFeature {
  std::string property;
  std::vector<Interval> intervals;

  bool operator==(const AttributedFeature&) const = default;
};

// The most important states reported by an explainable classifier for one
// prediction, optionally with the window they were taken from.
struct AttributionSet {
  std::string predicted_activity;
  std::vector<AttributedFeature> features;
  std::optional<Interval> window;

  bool operator==(const AttributionSet&) const = default;
};

// Throws SchemaViolation unless every interval has start <= end and each
// feature's intervals are sorted and pairwise non-overlapping.
void ValidateAttributionSet(const AttributionSet& attrs);

// Portion of `state` inside [win_start, win_end]; absent when the closed
// intervals do not intersect.
std::optional<SemanticState> ClipState(const SemanticState& state,
                                       Timestamp win_start, Timestamp win_end);

Duration StateDuration(const SemanticState& state);

}  // namespace xadl
