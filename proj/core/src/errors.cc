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

#include "xadl/errors.hpp"

#include <utility>

namespace xadl {

int ExitCodeFor(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::kUsage:
      return 2;
    case ErrorCategory::kData:
      return 3;
    case ErrorCategory::kProvider:
      return 4;
  }
  return 1;
}

MalformedRow::MalformedRow(std::size_t line, const std::string& reason)
    : Error(ErrorCategory::kData, "MalformedRow",
            "line " + std::to_string(line) + ": " + reason),
      line_(line) {}

namespace {
std::string JoinAttempts(const std::vector<std::string>& attempts) {
  std::string out = "retries exhausted after " +
                    std::to_string(attempts.size()) + " attempts";
  for (std::size_t i = 0; i < attempts.size(); ++i) {
    out += (i == 0 ? ": " : "; ");
    out += "#" + std::to_string(i + 1) + " " + attempts[i];
  }
  return out;
}
}  // namespace

RateLimitedExhausted::RateLimitedExhausted(std::vector<std::string> attempts)
    : Error(ErrorCategory::kProvider, "RateLimitedExhausted",
            JoinAttempts(attempts)),
      attempts_(std::move(attempts)) {}

}  // namespace xadl
