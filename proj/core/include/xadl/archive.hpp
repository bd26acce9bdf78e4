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
#include <string_view>
#include <vector>

#include "xadl/model.hpp"
#include "xadl/pairing.hpp"

namespace xadl {

// Line-delimited JSON archives. Timestamps are "YYYY-MM-DD HH:MM:SS[.fff]".
//
// windows.jsonl, one window per line:
//   {"index":0,"start":"...","end":"...",
//    "states":[{"property":"StoveOn","start":"...","end":"..."}]}
//
// predictions.jsonl, one record per line:
//   {"window":{"index":0,"start":"...","end":"..."},"status":"ok",
//    "activity":"...","explanation":"...","raw_model_output":"...",
//    "prompt_fingerprint":"...","usage":{"prompt":0,"completion":0},
//    "error":""}
std::string WindowToJsonLine(const StateWindow& window);
std::string SerializeWindows(std::span<const StateWindow> windows);
// Throws SchemaViolation naming the offending line.
std::vector<StateWindow> ParseWindows(std::string_view text);

std::string PredictionToJsonLine(const PredictionRecord& record);
std::string SerializePredictions(std::span<const PredictionRecord> records);
std::vector<PredictionRecord> ParsePredictions(std::string_view text);

// timestamp,entity,status,reason
std::string SerializeUnpaired(std::span<const UnpairedEvent> unpaired);

}  // namespace xadl
