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

#include "xadl/catalog.hpp"

#include <algorithm>

#include "json.hpp"
#include "xadl/errors.hpp"
#include "xadl/io.hpp"
#include "xadl/model.hpp"

namespace xadl {
namespace {

using ordered_json = nlohmann::ordered_json;

bool SameStatus(std::string_view a, std::string_view b) {
  return NormalizeLabel(a) == NormalizeLabel(b);
}

std::string RequireString(const nlohmann::json& obj, const char* key,
                          const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string() || it->get<std::string>().empty()) {
    throw CatalogError(where + ": missing string field '" + key + "'");
  }
  return it->get<std::string>();
}

}  // namespace

SensorCatalog::SensorCatalog(std::vector<EntityInfo> entities)
    : entities_(std::move(entities)) {
  for (std::size_t i = 0; i < entities_.size(); ++i) {
    EntityInfo& e = entities_[i];
    if (e.id.empty()) throw CatalogError("entity with empty id");
    if (!by_id_.emplace(e.id, i).second) throw CatalogError("duplicate entity '" + e.id + "'");
    if (e.pairings.empty()) throw CatalogError("entity '" + e.id + "' has no pairing");
    if (e.statuses.empty()) {
      for (const auto& p : e.pairings) {
        e.statuses.push_back(p.start);
        e.statuses.push_back(p.end);
      }
    }
    for (const auto& status : e.statuses) {
      const auto uses = std::count_if(e.pairings.begin(), e.pairings.end(),
                                      [&](const StatePairing& p) {
                                        return SameStatus(p.start, status) ||
                                               SameStatus(p.end, status);
                                      });
      if (uses != 1) {
        throw CatalogError("status '" + status + "' of '" + e.id +
                           "' must belong to exactly one pairing");
      }
    }
    for (const auto& p : e.pairings) {
      const auto declared = [&](const std::string& s) {
        return std::any_of(e.statuses.begin(), e.statuses.end(),
                           [&](const std::string& v) { return SameStatus(v, s); });
      };
      if (!declared(p.start) || !declared(p.end) || SameStatus(p.start, p.end)) {
        throw CatalogError("invalid pairing " + p.start + "/" + p.end + " on '" + e.id + "'");
      }
      if (p.property.empty() || p.label.empty()) {
        throw CatalogError("pairing on '" + e.id + "' needs property and label");
      }
      if (!label_by_property_.emplace(p.property, p.label).second) {
        throw CatalogError("duplicate property '" + p.property + "'");
      }
      if (!property_by_label_.emplace(p.label, p.property).second) {
        throw CatalogError("duplicate label '" + p.label + "'");
      }
    }
  }
}

SensorCatalog SensorCatalog::FromJson(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw CatalogError(std::string("catalog is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("entities") || !doc["entities"].is_object()) {
    throw CatalogError("catalog needs an 'entities' object");
  }
  std::vector<EntityInfo> entities;
  for (const auto& [id, spec] : doc["entities"].items()) {
    if (!spec.is_object()) throw CatalogError("entity '" + id + "' must be an object");
    EntityInfo info;
    info.id = id;
    if (auto it = spec.find("statuses"); it != spec.end()) {
      info.statuses = it->get<std::vector<std::string>>();
    }
    if (auto it = spec.find("pairings"); it != spec.end()) {
      for (const auto& p : *it) {
        const std::string where = "entity '" + id + "'";
        info.pairings.push_back({RequireString(p, "start", where),
                                 RequireString(p, "end", where),
                                 p.value("property", id),
                                 RequireString(p, "label", where)});
      }
    } else {
      const std::string where = "entity '" + id + "'";
      info.pairings.push_back({RequireString(spec, "start", where),
                               RequireString(spec, "end", where),
                               spec.value("property", id),
                               RequireString(spec, "label", where)});
    }
    entities.push_back(std::move(info));
  }
  return SensorCatalog(std::move(entities));
}

SensorCatalog SensorCatalog::Load(const std::string& path) {
  return FromJson(ReadFile(path));
}

std::string SensorCatalog::ToJson() const {
  ordered_json entities = ordered_json::object();
  for (const auto& e : entities_) {
    ordered_json spec;
    spec["statuses"] = e.statuses;
    ordered_json pairings = ordered_json::array();
    for (const auto& p : e.pairings) {
      pairings.push_back({{"start", p.start}, {"end", p.end},
                          {"property", p.property}, {"label", p.label}});
    }
    spec["pairings"] = std::move(pairings);
    entities[e.id] = std::move(spec);
  }
  return ordered_json{{"entities", std::move(entities)}}.dump(2) + "\n";
}

const EntityInfo* SensorCatalog::FindEntity(std::string_view id) const {
  auto it = by_id_.find(id);
  return it == by_id_.end() ? nullptr : &entities_[it->second];
}

std::optional<std::string> SensorCatalog::ResolveStatus(std::string_view entity,
                                                        std::string_view status) const {
  const EntityInfo* e = FindEntity(entity);
  if (e == nullptr) return std::nullopt;
  for (const auto& s : e->statuses) {
    if (SameStatus(s, status)) return s;
  }
  return std::nullopt;
}

const StatePairing* SensorCatalog::OpenedBy(std::string_view entity,
                                            std::string_view status) const {
  const EntityInfo* e = FindEntity(entity);
  if (e == nullptr) return nullptr;
  for (const auto& p : e->pairings) {
    if (SameStatus(p.start, status)) return &p;
  }
  return nullptr;
}

const StatePairing* SensorCatalog::ClosedBy(std::string_view entity,
                                            std::string_view status) const {
  const EntityInfo* e = FindEntity(entity);
  if (e == nullptr) return nullptr;
  for (const auto& p : e->pairings) {
    if (SameStatus(p.end, status)) return &p;
  }
  return nullptr;
}

const std::string& SensorCatalog::LabelFor(std::string_view property) const {
  auto it = label_by_property_.find(property);
  if (it == label_by_property_.end()) {
    throw MissingLabel("no label for property '" + std::string(property) + "'");
  }
  return it->second;
}

bool SensorCatalog::HasProperty(std::string_view property) const {
  return label_by_property_.find(property) != label_by_property_.end();
}

std::optional<std::string> SensorCatalog::PropertyForLabel(std::string_view label) const {
  auto it = property_by_label_.find(label);
  if (it == property_by_label_.end()) return std::nullopt;
  return it->second;
}

}  // namespace xadl
