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

#include "xadl/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <sstream>

#include "json.hpp"
#include "xadl/errors.hpp"
#include "xadl/rng.hpp"

namespace xadl {

namespace {

double Ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

std::string Fixed(double v, int places = 4) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", places, v);
  return buf;
}

std::string CsvField(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

EvalReport Score(std::span<const ScoredPair> pairs, const ActivitySet& activities) {
  const std::size_t n = activities.size();
  if (n == 0) throw EmptyActivitySet("no activities to score against");
  EvalReport report;
  report.confusion.assign(n, std::vector<std::size_t>(n + 1, 0));

  for (const auto& p : pairs) {
    if (p.status == PredictionStatus::kSkipped) {
      ++report.skipped;
      continue;
    }
    auto t = activities.IndexOf(p.truth);
    if (!t) throw UnknownActivity("truth label '" + p.truth + "' is not a candidate");
    std::size_t col = n;
    switch (p.status) {
      case PredictionStatus::kOk: {
        auto c = activities.IndexOf(p.predicted);
        if (!c) throw UnknownActivity("predicted label '" + p.predicted + "' is not a candidate");
        col = *c;
        break;
      }
      case PredictionStatus::kHallucinated: ++report.hallucinated; break;
      case PredictionStatus::kUnparseable: ++report.unparseable; break;
      case PredictionStatus::kMissingExplanation: ++report.missing_explanation; break;
      case PredictionStatus::kProviderError: ++report.provider_error; break;
      case PredictionStatus::kSkipped: break;
    }
    ++report.confusion[*t][col];
    ++report.scored;
  }
  if (report.scored == 0) throw EmptyInput("no predictions to score");

  std::size_t correct = 0;
  double weighted = 0.0;
  double macro = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ClassMetrics m;
    m.label = activities.labels()[i];
    for (std::size_t j = 0; j <= n; ++j) m.support += report.confusion[i][j];
    for (std::size_t r = 0; r < n; ++r) m.predicted += report.confusion[r][i];
    const std::size_t tp = report.confusion[i][i];
    correct += tp;
    m.precision = Ratio(tp, m.predicted);
    m.recall = Ratio(tp, m.support);
    m.f1 = tp == 0 ? 0.0 : 2.0 * m.precision * m.recall / (m.precision + m.recall);
    weighted += static_cast<double>(m.support) * m.f1;
    macro += m.f1;
    report.classes.push_back(std::move(m));
  }
  report.weighted_f1 = weighted / static_cast<double>(report.scored);
  report.macro_f1 = macro / static_cast<double>(n);
  report.accuracy = Ratio(correct, report.scored);
  return report;
}

std::string EvalReport::ToJson() const {
  nlohmann::ordered_json doc;
  doc["weighted_f1"] = weighted_f1;
  doc["macro_f1"] = macro_f1;
  doc["accuracy"] = accuracy;
  doc["scored"] = scored;
  doc["failures"] = {{"hallucinated", hallucinated},
                     {"unparseable", unparseable},
                     {"missing_explanation", missing_explanation},
                     {"provider_error", provider_error}};
  doc["skipped"] = skipped;
  auto& cls = doc["classes"] = nlohmann::ordered_json::array();
  nlohmann::ordered_json labels = nlohmann::ordered_json::array();
  for (const auto& c : classes) {
    cls.push_back({{"label", c.label},
                   {"precision", c.precision},
                   {"recall", c.recall},
                   {"f1", c.f1},
                   {"support", c.support},
                   {"predicted", c.predicted}});
    labels.push_back(c.label);
  }
  labels.push_back(kFailedColumn);
  doc["confusion"] = {{"rows", "truth"}, {"columns", labels}, {"counts", confusion}};
  return doc.dump(2) + "\n";
}

std::string EvalReport::ToText() const {
  std::size_t width = 8;
  for (const auto& c : classes) width = std::max(width, c.label.size());
  std::ostringstream out;
  const auto pad = [&](const std::string& s) { return s + std::string(width - s.size(), ' '); };
  out << pad("class") << "  precision  recall     f1         support\n";
  for (const auto& c : classes) {
    out << pad(c.label) << "  " << Fixed(c.precision) << "     " << Fixed(c.recall) << "     "
        << Fixed(c.f1) << "     " << c.support << "\n";
  }
  out << "\nweighted F1 " << Fixed(weighted_f1) << ", macro F1 " << Fixed(macro_f1)
      << ", accuracy " << Fixed(accuracy) << " over " << scored << " windows\n";
  out << "failed: " << hallucinated << " hallucinated, " << unparseable << " unparseable, "
      << missing_explanation << " missing explanation, " << provider_error
      << " provider error; skipped: " << skipped << "\n";
  return out.str();
}

std::string EvalReport::ToConfusionCsv() const {
  std::ostringstream out;
  out << "truth";
  for (const auto& c : classes) out << ',' << CsvField(c.label);
  out << ',' << kFailedColumn << '\n';
  for (std::size_t i = 0; i < classes.size(); ++i) {
    out << CsvField(classes[i].label);
    for (std::size_t v : confusion[i]) out << ',' << v;
    out << '\n';
  }
  return out.str();
}

namespace {

// Window indices grouped by normalized class, classes in sorted order.
std::map<std::string, std::vector<std::size_t>> GroupByClass(std::span<const LabeledWindow> windows) {
  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < windows.size(); ++i) {
    groups[NormalizeLabel(windows[i].activity)].push_back(i);
  }
  return groups;
}

}  // namespace

TrainTestSplit SplitTrainTest(std::span<const LabeledWindow> windows, double train_fraction,
                              std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw InvalidParameters("train fraction must be in (0, 1)");
  }
  std::mt19937_64 rng(seed);
  std::vector<bool> in_train(windows.size(), false);
  for (auto& [label, idx] : GroupByClass(windows)) {
    const std::size_t n = idx.size();
    if (n < 2) {
      throw ClassTooSmall("class '" + label + "' has " + std::to_string(n) +
                          " window(s); stratifying needs at least 2");
    }
    auto k = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(n)));
    k = std::clamp<std::size_t>(k, 1, n - 1);
    Shuffle(idx, rng);
    for (std::size_t i = 0; i < k; ++i) in_train[idx[i]] = true;
  }
  TrainTestSplit split;
  for (std::size_t i = 0; i < windows.size(); ++i) {
    (in_train[i] ? split.train : split.test).push_back(windows[i]);
  }
  return split;
}

std::vector<LabeledWindow> Downsample(std::span<const LabeledWindow> windows,
                                      const std::set<std::string>& classes, std::uint64_t seed) {
  std::vector<LabeledWindow> all(windows.begin(), windows.end());
  if (classes.empty()) return all;
  std::set<std::string> named;
  for (const auto& c : classes) named.insert(NormalizeLabel(c));

  auto groups = GroupByClass(windows);
  std::vector<std::size_t> others;
  for (const auto& [label, idx] : groups) {
    if (!named.contains(label)) others.push_back(idx.size());
  }
  if (others.empty()) return all;
  std::sort(others.begin(), others.end());
  const std::size_t target = others[(others.size() - 1) / 2];

  std::mt19937_64 rng(seed);
  std::vector<bool> keep(windows.size(), true);
  for (auto& [label, idx] : groups) {
    if (!named.contains(label) || idx.size() <= target) continue;
    Shuffle(idx, rng);
    for (std::size_t i = target; i < idx.size(); ++i) keep[idx[i]] = false;
  }
  std::vector<LabeledWindow> out;
  for (std::size_t i = 0; i < windows.size(); ++i) {
    if (keep[i]) out.push_back(windows[i]);
  }
  return out;
}

}  // namespace xadl
