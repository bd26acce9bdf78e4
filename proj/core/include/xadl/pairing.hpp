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

#include <span>
#include <string>
#include <vector>

#include "xadl/catalog.hpp"
#include "xadl/model.hpp"

namespace xadl {

struct UnpairedEvent {
  SemanticEvent event;
  std::string reason;

  bool operator==(const UnpairedEvent&) const = default;
};

struct PairingResult {
  std::vector<SemanticState> states;  // sorted by (start, property)
  std::vector<UnpairedEvent> unpaired;  // in input order
};

struct PairingOptions {
  // Closes a still-open state at the last event timestamp of the stream
  // instead of reporting it unpaired.
  bool close_dangling_at_stream_end = false;
};

// Pairs ⟨e, s, t1⟩ with ⟨e, s', t2⟩ when s opens and s' closes the same
// catalog pairing, t1 <= t2, and no other event of e lies between them in
// the (time-sorted) stream. Every event ends up in at most one state; the
// rest are returned as diagnostics.
PairingResult PairEvents(std::span<const SemanticEvent> events,
                         const SensorCatalog& catalog,
                         const PairingOptions& options = {});

}  // namespace xadl
