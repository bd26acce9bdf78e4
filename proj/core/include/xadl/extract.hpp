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

#include <string>
#include <string_view>

#include "xadl/model.hpp"

namespace xadl {

enum class ExtractionMode { kE2e, kExplainer };

struct Extraction {
  std::string activity;  // canonical label; empty in explainer mode
  std::string explanation;
  std::string reasoning;
  bool from_envelope = false;

  bool operator==(const Extraction&) const = default;
};

// The machine-readable answer the system prompts ask for:
// {"activity": ..., "explanation": ..., "reasoning": ...}. An empty
// activity or reasoning is left out.
std::string RenderEnvelope(std::string_view activity, std::string_view explanation,
                           std::string_view reasoning = {});

// Parses raw model text. The last JSON envelope in the text wins; without
// one, a free-text scan looks for a "predicted the activity" cue and
// otherwise for the longest candidate label mentioned anywhere. Free text
// is kept whole as the explanation.
//
// Throws HallucinatedLabel when the stated activity is not in
// `activities`, MissingExplanation, or UnparseableOutput. Never returns a
// label outside `activities`.
Extraction Extract(std::string_view raw, const ActivitySet& activities, ExtractionMode mode);

}  // namespace xadl
