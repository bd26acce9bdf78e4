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

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace xadl {

// A complementary status pair of one entity. `start` opens a state of
// `property`, `end` closes it.
struct StatePairing {
  std::string start;
  std::string end;
  std::string property;
  std::string label;  // human-readable, e.g. "the fridge door is open"
};

struct EntityInfo {
  std::string id;
  std::vector<std::string> statuses;
  std::vector<StatePairing> pairings;
};

// Per-entity sensor metadata.
//
// JSON layout (both entity forms may be mixed):
//
//   {"entities": {
//      "FridgeDoor": {"label": "the fridge door is open",
//                     "start": "Opened", "end": "Closed"},
//      "Stove": {"statuses": ["On", "Off"],
//                "pairings": [{"start": "On", "end": "Off",
//                              "property": "StoveOn",
//                              "label": "the stove is on"}]}}}
//
// The short form uses the entity id as the property name.
class SensorCatalog {
 public:
  SensorCatalog() = default;
  // Validates: each status belongs to exactly one pairing, properties and
  // labels are unique. Throws CatalogError.
  explicit SensorCatalog(std::vector<EntityInfo> entities);

  static SensorCatalog FromJson(std::string_view json_text);
  static SensorCatalog Load(const std::string& path);
  std::string ToJson() const;

  const EntityInfo* FindEntity(std::string_view id) const;
  // Canonical spelling of `status` for `entity` (case-insensitive match).
  std::optional<std::string> ResolveStatus(std::string_view entity,
                                           std::string_view status) const;
  // The pairing that `status` opens, or nullptr if it is a closing status.
  const StatePairing* OpenedBy(std::string_view entity, std::string_view status) const;
  const StatePairing* ClosedBy(std::string_view entity, std::string_view status) const;

  // Human-readable label of a state property; throws MissingLabel.
  const std::string& LabelFor(std::string_view property) const;
  bool HasProperty(std::string_view property) const;
  // Reverse of LabelFor.
  std::optional<std::string> PropertyForLabel(std::string_view label) const;

  const std::vector<EntityInfo>& entities() const { return entities_; }

 private:
  std::vector<EntityInfo> entities_;
  std::map<std::string, std::size_t, std::less<>> by_id_;
  std::map<std::string, std::string, std::less<>> label_by_property_;
  std::map<std::string, std::string, std::less<>> property_by_label_;
};

}  // namespace xadl
