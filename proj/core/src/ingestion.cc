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

#include "xadl/ingestion.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>

#include "xadl/errors.hpp"

namespace xadl {
namespace {

std::string_view Trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string> SplitOn(std::string_view line, char sep, bool drop_empty) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = line.find(sep, pos);
    std::string_view field = Trim(line.substr(pos, next == std::string_view::npos
                                                       ? std::string_view::npos
                                                       : next - pos));
    if (!field.empty() || !drop_empty) out.emplace_back(field);
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

// Tab-delimited when the line has a tab (empty fields collapse, as in the
// UCI files), comma-delimited otherwise.
std::vector<std::string> SplitRow(std::string_view line) {
  if (line.find('\t') != std::string_view::npos) return SplitOn(line, '\t', true);
  return SplitOn(line, ',', false);
}

struct Line {
  std::size_t number;
  std::string_view text;
};

// Non-blank, non-comment lines. Strips a UTF-8 BOM and CR.
std::vector<Line> DataLines(std::string_view text) {
  if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
  std::vector<Line> out;
  std::size_t number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    ++number;
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    const std::string_view trimmed = Trim(raw);
    if (!trimmed.empty() && trimmed.front() != '#') out.push_back({number, raw});
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  return out;
}

Timestamp ParseTs(const std::string& field, std::size_t line) {
  if (auto ts = Timestamp::TryParse(field)) return *ts;
  throw MalformedRow(line, "invalid timestamp '" + field + "'");
}

Timestamp ParseEpochMs(const std::string& field, std::size_t line) {
  std::int64_t ms = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), ms);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw MalformedRow(line, "invalid epoch milliseconds '" + field + "'");
  }
  return Timestamp::FromMillis(ms);
}

bool IsNumeric(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isdigit(c) || c == '-';
  });
}

void RequireArity(const std::vector<std::string>& fields, std::size_t min,
                  std::size_t max, std::size_t line) {
  if (fields.size() < min || fields.size() > max) {
    throw MalformedRow(line, "expected " + std::to_string(min) +
                                 (min == max ? "" : "-" + std::to_string(max)) +
                                 " columns, got " + std::to_string(fields.size()));
  }
}

bool IsUciHeader(const std::vector<std::string>& fields) {
  if (fields.empty()) return true;
  const std::string first = NormalizeLabel(fields.front());
  return first == "start time" || first.front() == '-';
}

SemanticEvent ResolveEvent(const SensorCatalog& catalog, std::string entity,
                           const std::string& status, Timestamp ts, std::size_t line) {
  if (catalog.FindEntity(entity) == nullptr) {
    throw UnknownEntity("line " + std::to_string(line) + ": unknown entity '" + entity + "'");
  }
  auto canonical = catalog.ResolveStatus(entity, status);
  if (!canonical) {
    throw MalformedRow(line, "status '" + status + "' not declared for '" + entity + "'");
  }
  return SemanticEvent{std::move(entity), *canonical, ts};
}

}  // namespace

std::optional<DatasetFormat> ParseDatasetFormat(std::string_view name) {
  if (name == "uci-adl") return DatasetFormat::kUciAdl;
  if (name == "marble") return DatasetFormat::kMarble;
  if (name == "generic-csv") return DatasetFormat::kGenericCsv;
  return std::nullopt;
}

std::string_view ToString(DatasetFormat format) {
  switch (format) {
    case DatasetFormat::kUciAdl: return "uci-adl";
    case DatasetFormat::kMarble: return "marble";
    case DatasetFormat::kGenericCsv: return "generic-csv";
  }
  return "unknown";
}

std::vector<SemanticEvent> ParseEventLog(std::string_view text, DatasetFormat format,
                                         const SensorCatalog& catalog) {
  std::vector<SemanticEvent> events;
  for (const auto& [number, line] : DataLines(text)) {
    auto fields = SplitRow(line);
    switch (format) {
      case DatasetFormat::kGenericCsv: {
        if (NormalizeLabel(fields.front()) == "timestamp") continue;
        RequireArity(fields, 3, 3, number);
        events.push_back(ResolveEvent(catalog, fields[1], fields[2],
                                      ParseTs(fields[0], number), number));
        break;
      }
      case DatasetFormat::kMarble: {
        if (!IsNumeric(fields.front())) continue;  // header
        RequireArity(fields, 3, 4, number);
        events.push_back(ResolveEvent(catalog, fields[1], fields[2],
                                      ParseEpochMs(fields[0], number), number));
        break;
      }
      case DatasetFormat::kUciAdl: {
        if (IsUciHeader(fields)) continue;
        RequireArity(fields, 5, 5, number);
        const Timestamp start = ParseTs(fields[0], number);
        const Timestamp end = ParseTs(fields[1], number);
        if (end < start) throw MalformedRow(number, "end precedes start");
        const std::string entity = fields[2] + fields[3];
        const EntityInfo* info = catalog.FindEntity(entity);
        if (info == nullptr) {
          throw UnknownEntity("line " + std::to_string(number) + ": unknown entity '" +
                              entity + "'");
        }
        const StatePairing& pairing = info->pairings.front();
        events.push_back({entity, pairing.start, start});
        events.push_back({entity, pairing.end, end});
        break;
      }
    }
  }
  std::stable_sort(events.begin(), events.end(),
                   [](const SemanticEvent& a, const SemanticEvent& b) { return a.ts < b.ts; });
  return events;
}

std::vector<GroundTruthInterval> ParseGroundTruth(std::string_view text,
                                                  DatasetFormat format,
                                                  const ActivitySet& activities,
                                                  const TruthOptions& options) {
  std::map<std::string, std::string> aliases;
  for (const auto& [from, to] : options.aliases) aliases[NormalizeLabel(from)] = to;
  std::set<std::string> excluded;
  for (const auto& label : options.excluded) excluded.insert(NormalizeLabel(label));

  std::vector<GroundTruthInterval> truth;
  for (const auto& [number, line] : DataLines(text)) {
    auto fields = SplitRow(line);
    std::string label;
    Timestamp start, end;
    switch (format) {
      case DatasetFormat::kGenericCsv:
        if (NormalizeLabel(fields.front()) == "start") continue;
        RequireArity(fields, 3, 3, number);
        start = ParseTs(fields[0], number);
        end = ParseTs(fields[1], number);
        label = fields[2];
        break;
      case DatasetFormat::kUciAdl:
        if (IsUciHeader(fields)) continue;
        RequireArity(fields, 3, 3, number);
        start = ParseTs(fields[0], number);
        end = ParseTs(fields[1], number);
        label = fields[2];
        break;
      case DatasetFormat::kMarble:
        if (fields.size() > 1 && !IsNumeric(fields[1])) continue;  // header
        RequireArity(fields, 3, 4, number);
        label = fields[0];
        start = ParseEpochMs(fields[1], number);
        end = ParseEpochMs(fields[2], number);
        break;
    }
    if (end < start) throw MalformedRow(number, "end precedes start");
    const std::string norm = NormalizeLabel(label);
    if (excluded.count(norm) != 0) continue;
    if (auto it = aliases.find(norm); it != aliases.end()) label = it->second;
    auto canonical = activities.Find(label);
    if (!canonical) {
      throw UnknownActivity("line " + std::to_string(number) + ": unknown activity '" +
                            label + "'");
    }
    truth.push_back({*canonical, start, end});
  }
  std::stable_sort(truth.begin(), truth.end(),
                   [](const GroundTruthInterval& a, const GroundTruthInterval& b) {
                     return a.start < b.start;
                   });
  return truth;
}

std::string SerializeEvents(std::span<const SemanticEvent> events) {
  std::ostringstream out;
  out << "timestamp,entity,status\n";
  for (const auto& e : events) out << e.ts.ToString() << ',' << e.entity << ',' << e.status << '\n';
  return out.str();
}

std::string SerializeGroundTruth(std::span<const GroundTruthInterval> truth) {
  std::ostringstream out;
  out << "start,end,activity\n";
  for (const auto& t : truth) {
    out << t.start.ToString() << ',' << t.end.ToString() << ',' << t.activity << '\n';
  }
  return out.str();
}

std::vector<SemanticEvent> ThresholdAdapter(std::span<const Sample> series,
                                            double threshold,
                                            const std::string& property) {
  std::vector<SemanticEvent> events;
  bool above = false;
  for (const Sample& s : series) {
    const bool now_above = s.value > threshold;
    if (now_above && !above) events.push_back({property, "Start", s.ts});
    if (!now_above && above) events.push_back({property, "End", s.ts});
    above = now_above;
  }
  return events;
}

LabelingResult LabelWindows(std::vector<StateWindow> windows,
                            std::span<const GroundTruthInterval> truth) {
  if (truth.empty()) throw EmptyInput("no ground-truth intervals to label against");
  std::vector<const GroundTruthInterval*> sorted;
  sorted.reserve(truth.size());
  for (const auto& t : truth) sorted.push_back(&t);
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const auto* a, const auto* b) { return a->start < b->start; });

  LabelingResult result;
  for (auto& w : windows) {
    const GroundTruthInterval* best = nullptr;
    Duration best_overlap{0};
    for (const auto* t : sorted) {
      if (t->start > w.end) break;
      const Duration overlap = std::min(w.end, t->end) - std::max(w.start, t->start);
      if (overlap > best_overlap) {
        best_overlap = overlap;
        best = t;
      }
    }
    if (best == nullptr) {
      ++result.dropped;
      continue;
    }
    result.labeled.push_back({std::move(w), best->activity});
  }
  return result;
}

}  // namespace xadl
