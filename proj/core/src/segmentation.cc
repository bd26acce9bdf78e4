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

#include "xadl/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "xadl/errors.hpp"

namespace xadl {

Duration WindowSpec::Stride() const {
  const double ms = static_cast<double>(length.count()) * (1.0 - overlap);
  return Duration(std::max<std::int64_t>(1, std::llround(ms)));
}

void WindowSpec::Validate() const {
  if (length.count() <= 0) throw InvalidParameters("window length must be positive");
  if (!(overlap >= 0.0 && overlap < 1.0)) {
    throw InvalidParameters("overlap must be in [0, 1), got " + std::to_string(overlap));
  }
}

WindowSpec WindowSpec::FromSeconds(double seconds, double overlap) {
  if (!(seconds > 0.0) || !std::isfinite(seconds)) {
    throw InvalidParameters("window length must be positive");
  }
  WindowSpec spec{Duration(std::llround(seconds * 1000.0)), overlap};
  spec.Validate();
  return spec;
}

std::uint64_t WindowCount(Duration span, const WindowSpec& spec) {
  spec.Validate();
  if (span < spec.length) return 0;
  return static_cast<std::uint64_t>((span - spec.length) / spec.Stride()) + 1;
}

std::vector<StateWindow> Segment(std::span<const SemanticState> states,
                                 const WindowSpec& spec, Interval span) {
  spec.Validate();
  if (span.end < span.start) throw InvalidParameters("segmentation span end precedes start");

  std::vector<const SemanticState*> by_start;
  by_start.reserve(states.size());
  for (const auto& s : states) by_start.push_back(&s);
  std::stable_sort(by_start.begin(), by_start.end(),
                   [](const auto* a, const auto* b) { return a->start < b->start; });

  const std::uint64_t count = WindowCount(span.end - span.start, spec);
  const Duration stride = spec.Stride();
  std::vector<StateWindow> windows;
  windows.reserve(count);

  // Window starts only increase, so a state ending before the current
  // window start can never meet a later window.
  std::vector<const SemanticState*> active;
  std::size_t next = 0;
  for (std::uint64_t k = 0; k < count; ++k) {
    StateWindow w;
    w.index = k;
    w.start = span.start + stride * static_cast<std::int64_t>(k);
    w.end = w.start + spec.length;
    while (next < by_start.size() && by_start[next]->start <= w.end) {
      active.push_back(by_start[next++]);
    }
    std::erase_if(active, [&](const SemanticState* s) { return s->end < w.start; });
    for (const SemanticState* s : active) {
      if (auto clipped = ClipState(*s, w.start, w.end)) w.states.push_back(std::move(*clipped));
    }
    std::sort(w.states.begin(), w.states.end(), [](const auto& a, const auto& b) {
      if (a.start != b.start) return a.start < b.start;
      if (a.property != b.property) return a.property < b.property;
      return a.end < b.end;
    });
    windows.push_back(std::move(w));
  }
  return windows;
}

Interval StateSpan(std::span<const SemanticState> states) {
  if (states.empty()) return {};
  Interval hull{states.front().start, states.front().end};
  for (const auto& s : states) {
    hull.start = std::min(hull.start, s.start);
    hull.end = std::max(hull.end, s.end);
  }
  return hull;
}

}  // namespace xadl

namespace xadl {

std::int64_t RequestsForHorizon(Duration horizon, const WindowSpec& spec) {
  spec.Validate();
  if (horizon.count() < 0) throw InvalidParameters("horizon must be non-negative");
  return horizon / spec.Stride();
}

}  // namespace xadl
