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

#include <cstdint>
#include <span>
#include <vector>

#include "xadl/model.hpp"

namespace xadl {

struct WindowSpec {
  Duration length;  // τ
  double overlap = 0.0;  // o, in [0, 1)

  // τ·(1−o) rounded to whole milliseconds, never below 1 ms.
  Duration Stride() const;
  // Throws InvalidParameters if τ <= 0 or o is outside [0, 1).
  void Validate() const;

  static WindowSpec FromSeconds(double seconds, double overlap);
};

// ⌊(D − τ)/stride⌋ + 1 for D >= τ, else 0.
std::uint64_t WindowCount(Duration span, const WindowSpec& spec);

// Slides windows of length τ from span.start in steps of the stride while
// the window still ends within span.end. Each window receives every state
// whose closed interval meets it, clipped to the window. `states` need not
// be sorted. Empty windows are kept.
std::vector<StateWindow> Segment(std::span<const SemanticState> states,
                                 const WindowSpec& spec, Interval span);

// The [first start, last end] hull of `states`; default segmentation span.
Interval StateSpan(std::span<const SemanticState> states);

}  // namespace xadl

namespace xadl {

// Requests issued by continuous operation over `horizon`: one per stride,
// ⌊horizon / stride⌋.
std::int64_t RequestsForHorizon(Duration horizon, const WindowSpec& spec);

}  // namespace xadl
