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

#include "xadl/model.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>

#include "xadl/errors.hpp"

namespace xadl {
namespace {

using std::chrono::days;
using std::chrono::floor;
using std::chrono::sys_days;
using std::chrono::year_month_day;

// Reads exactly `width` digits at `pos`.
bool ReadFixed(std::string_view text, std::size_t& pos, std::size_t width,
               int& out) {
  if (pos + width > text.size()) return false;
  for (std::size_t i = pos; i < pos + width; ++i) {
    if (!std::isdigit(static_cast<unsigned char>(text[i]))) return false;
  }
  std::from_chars(text.data() + pos, text.data() + pos + width, out);
  pos += width;
  return true;
}

bool Expect(std::string_view text, std::size_t& pos, char c) {
  if (pos >= text.size() || text[pos] != c) return false;
  ++pos;
  return true;
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::optional<Duration> ParseClock(std::string_view text, std::size_t& pos) {
  int h = 0, m = 0, s = 0;
  if (!ReadFixed(text, pos, 2, h) || !Expect(text, pos, ':') ||
      !ReadFixed(text, pos, 2, m) || !Expect(text, pos, ':') ||
      !ReadFixed(text, pos, 2, s)) {
    return std::nullopt;
  }
  if (h > 23 || m > 59 || s > 59) return std::nullopt;
  int ms = 0;
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    std::size_t digits = 0;
    int scale = 100;
    while (pos < text.size() &&
           std::isdigit(static_cast<unsigned char>(text[pos]))) {
      if (digits < 3) ms += (text[pos] - '0') * scale;
      scale /= 10;
      ++digits;
      ++pos;
    }
    if (digits == 0) return std::nullopt;
  }
  return std::chrono::hours(h) + std::chrono::minutes(m) +
         std::chrono::seconds(s) + Duration(ms);
}

}  // namespace

Timestamp Timestamp::FromCivil(int year, unsigned month, unsigned day,
                               int hour, int minute, int second, int millis) {
  const sys_days date{std::chrono::year{year} / std::chrono::month{month} /
                      std::chrono::day{day}};
  return Timestamp(TimePoint(date) + std::chrono::hours(hour) +
                   std::chrono::minutes(minute) + std::chrono::seconds(second) +
                   Duration(millis));
}

std::optional<Timestamp> Timestamp::TryParse(std::string_view text) {
  text = Trim(text);
  std::size_t pos = 0;
  int y = 0, mo = 0, d = 0;
  if (!ReadFixed(text, pos, 4, y) || !Expect(text, pos, '-') ||
      !ReadFixed(text, pos, 2, mo) || !Expect(text, pos, '-') ||
      !ReadFixed(text, pos, 2, d)) {
    return std::nullopt;
  }
  if (pos >= text.size() || (text[pos] != ' ' && text[pos] != 'T')) {
    return std::nullopt;
  }
  ++pos;
  const auto clock = ParseClock(text, pos);
  if (!clock || pos != text.size()) return std::nullopt;
  const year_month_day ymd{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(mo)},
                           std::chrono::day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) return std::nullopt;
  return Timestamp(TimePoint(sys_days(ymd)) + *clock);
}

Timestamp Timestamp::Parse(std::string_view text) {
  if (auto ts = TryParse(text)) return *ts;
  throw InvalidParameters("invalid timestamp '" + std::string(text) + "'");
}

Duration Timestamp::SinceMidnight() const {
  return tp_ - floor<days>(tp_);
}

std::string Timestamp::TimeOfDay() const {
  const auto since = std::chrono::duration_cast<std::chrono::seconds>(SinceMidnight());
  const std::chrono::hh_mm_ss<std::chrono::seconds> hms(since);
  char buf[16];
  std::snprintf(buf, sizeof buf, "%02d:%02d:%02d",
                static_cast<int>(hms.hours().count()),
                static_cast<int>(hms.minutes().count()),
                static_cast<int>(hms.seconds().count()));
  return buf;
}

std::string Timestamp::ToString() const {
  const auto day = floor<days>(tp_);
  const year_month_day ymd(day);
  const std::int64_t ms = (tp_ - day).count() % 1000;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  std::string out = buf + TimeOfDay();
  if (ms != 0) {
    std::snprintf(buf, sizeof buf, ".%03d", static_cast<int>(ms));
    out += buf;
  }
  return out;
}

std::optional<Duration> ParseTimeOfDay(std::string_view text) {
  text = Trim(text);
  std::size_t pos = 0;
  auto clock = ParseClock(text, pos);
  if (!clock || pos != text.size()) return std::nullopt;
  return clock;
}

std::string NormalizeLabel(std::string_view label) {
  label = Trim(label);
  std::string out(label);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return out;
}

ActivitySet::ActivitySet(std::vector<std::string> labels)
    : labels_(std::move(labels)) {
  normalized_.reserve(labels_.size());
  for (const auto& label : labels_) {
    std::string norm = NormalizeLabel(label);
    if (norm.empty()) throw InvalidParameters("activity labels must be non-empty");
    if (std::find(normalized_.begin(), normalized_.end(), norm) != normalized_.end()) {
      throw InvalidParameters("duplicate activity label '" + label + "'");
    }
    normalized_.push_back(std::move(norm));
  }
}

std::optional<std::size_t> ActivitySet::IndexOf(std::string_view label) const {
  const std::string norm = NormalizeLabel(label);
  for (std::size_t i = 0; i < normalized_.size(); ++i) {
    if (normalized_[i] == norm) return i;
  }
  return std::nullopt;
}

std::optional<std::string> ActivitySet::Find(std::string_view label) const {
  if (auto i = IndexOf(label)) return labels_[*i];
  return std::nullopt;
}

std::string_view ToString(PredictionStatus status) {
  switch (status) {
    case PredictionStatus::kOk: return "ok";
    case PredictionStatus::kHallucinated: return "hallucinated";
    case PredictionStatus::kUnparseable: return "unparseable";
    case PredictionStatus::kMissingExplanation: return "missing_explanation";
    case PredictionStatus::kProviderError: return "provider_error";
    case PredictionStatus::kSkipped: return "skipped";
  }
  return "unknown";
}

std::optional<PredictionStatus> ParsePredictionStatus(std::string_view text) {
  for (auto s : {PredictionStatus::kOk, PredictionStatus::kHallucinated,
                 PredictionStatus::kUnparseable, PredictionStatus::kMissingExplanation,
                 PredictionStatus::kProviderError, PredictionStatus::kSkipped}) {
    if (ToString(s) == text) return s;
  }
  return std::nullopt;
}

void ValidateAttributionSet(const AttributionSet& attrs) {
  if (attrs.window && attrs.window->end < attrs.window->start) {
    throw SchemaViolation("window end precedes start");
  }
  for (const auto& feature : attrs.features) {
    if (feature.property.empty()) throw SchemaViolation("feature with empty property");
    for (std::size_t i = 0; i < feature.intervals.size(); ++i) {
      const Interval& iv = feature.intervals[i];
      if (iv.end < iv.start) {
        throw SchemaViolation("interval end precedes start for '" + feature.property + "'");
      }
      if (i > 0 && iv.start < feature.intervals[i - 1].end) {
        throw SchemaViolation("intervals for '" + feature.property +
                              "' overlap or are unsorted");
      }
    }
  }
}

std::optional<SemanticState> ClipState(const SemanticState& state,
                                       Timestamp win_start, Timestamp win_end) {
  if (state.end < win_start || state.start > win_end) return std::nullopt;
  return SemanticState{state.property, std::max(state.start, win_start),
                       std::min(state.end, win_end)};
}

Duration StateDuration(const SemanticState& state) { return state.end - state.start; }

}  // namespace xadl
