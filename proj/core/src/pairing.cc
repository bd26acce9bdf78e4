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

#include "xadl/pairing.hpp"

#include <algorithm>
#include <map>
#include <optional>

namespace xadl {

PairingResult PairEvents(std::span<const SemanticEvent> events,
                         const SensorCatalog& catalog,
                         const PairingOptions& options) {
  PairingResult result;
  // Per entity: the most recent event not yet consumed, by input index.
  std::map<std::string, std::size_t, std::less<>> pending;
  std::vector<std::pair<std::size_t, std::string>> orphaned;

  for (std::size_t i = 0; i < events.size(); ++i) {
    const SemanticEvent& ev = events[i];
    auto it = pending.find(ev.entity);
    if (it != pending.end()) {
      const SemanticEvent& open = events[it->second];
      const StatePairing* opened = catalog.OpenedBy(open.entity, open.status);
      const StatePairing* closed = catalog.ClosedBy(ev.entity, ev.status);
      if (opened != nullptr && opened == closed && open.ts <= ev.ts) {
        result.states.push_back({opened->property, open.ts, ev.ts});
        pending.erase(it);
        continue;
      }
      orphaned.emplace_back(it->second, "superseded by a later event of the same entity");
      it->second = i;
    } else {
      pending.emplace(ev.entity, i);
    }
  }

  const Timestamp stream_end = events.empty() ? Timestamp{} : events.back().ts;
  for (const auto& [entity, index] : pending) {
    const SemanticEvent& ev = events[index];
    const StatePairing* opened = catalog.OpenedBy(ev.entity, ev.status);
    if (options.close_dangling_at_stream_end && opened != nullptr) {
      result.states.push_back({opened->property, ev.ts, stream_end});
    } else {
      orphaned.emplace_back(index, opened != nullptr ? "no closing event before stream end"
                                                     : "closing event without an opening event");
    }
  }

  std::sort(orphaned.begin(), orphaned.end());
  for (auto& [index, reason] : orphaned) {
    result.unpaired.push_back({events[index], std::move(reason)});
  }
  std::stable_sort(result.states.begin(), result.states.end(),
                   [](const SemanticState& a, const SemanticState& b) {
                     if (a.start != b.start) return a.start < b.start;
                     return a.property < b.property;
                   });
  return result;
}

}  // namespace xadl
