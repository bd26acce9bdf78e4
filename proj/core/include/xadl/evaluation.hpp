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
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "xadl/ingestion.hpp"
#include "xadl/model.hpp"

namespace xadl {

// One scored window. `status` other than kOk marks a failure; the
// predicted label is then ignored. kSkipped windows are not scored.
struct ScoredPair {
  std::string truth;
  std::string predicted;
  PredictionStatus status = PredictionStatus::kOk;
};

struct ClassMetrics {
  std::string label;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;    // windows whose truth is this class
  std::size_t predicted = 0;  // windows predicted as this class
};

struct EvalReport {
  std::vector<ClassMetrics> classes;  // in ActivitySet order
  double weighted_f1 = 0.0;
  double macro_f1 = 0.0;
  double accuracy = 0.0;
  // n rows (truth) by n+1 columns (predicted, then "failed").
  std::vector<std::vector<std::size_t>> confusion;
  std::size_t scored = 0;
  std::size_t hallucinated = 0;
  std::size_t unparseable = 0;
  std::size_t missing_explanation = 0;
  std::size_t provider_error = 0;
  std::size_t skipped = 0;

  std::string ToJson() const;
  std::string ToText() const;
  std::string ToConfusionCsv() const;
};

inline constexpr std::string_view kFailedColumn = "(failed)";

// Throws EmptyInput when nothing is left to score, UnknownActivity for
// labels outside `activities`.
EvalReport Score(std::span<const ScoredPair> pairs, const ActivitySet& activities);

struct TrainTestSplit {
  std::vector<LabeledWindow> train;
  std::vector<LabeledWindow> test;
};

// Stratified split: each class contributes round(fraction·n) windows,
// clamped to [1, n−1], to the train side. Both sides keep input order.
// Throws InvalidParameters for a fraction outside (0, 1), ClassTooSmall
// for a class with fewer than 2 windows.
TrainTestSplit SplitTrainTest(std::span<const LabeledWindow> windows, double train_fraction,
                              std::uint64_t seed);

// Reduces every class in `classes` to the lower median of the per-class
// counts of the classes not named, by seeded uniform sampling. Classes at
// or below the target are untouched. Input order is preserved.
std::vector<LabeledWindow> Downsample(std::span<const LabeledWindow> windows,
                                      const std::set<std::string>& classes, std::uint64_t seed);

}  // namespace xadl
