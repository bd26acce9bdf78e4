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

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace xadl {

// Broad failure classes. Each maps onto one CLI exit code.
enum class ErrorCategory {
  kUsage,     // exit 2
  kData,      // exit 3
  kProvider,  // exit 4
};

int ExitCodeFor(ErrorCategory category);

// Base of every error the library throws. `code()` is the stable,
// machine-parseable error name (e.g. "MalformedRow").
class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, std::string code, const std::string& message)
      : std::runtime_error(message),
        category_(category),
        code_(std::move(code)) {}

  ErrorCategory category() const { return category_; }
  const std::string& code() const { return code_; }

 private:
  ErrorCategory category_;
  std::string code_;
};

#define XADL_DEFINE_ERROR(Name, Category)                  \
  class Name : public Error {                              \
   public:                                                 \
    explicit Name(const std::string& message)              \
        : Error(ErrorCategory::Category, #Name, message) {} \
  }

XADL_DEFINE_ERROR(UsageError, kUsage);
XADL_DEFINE_ERROR(InvalidParameters, kUsage);

XADL_DEFINE_ERROR(UnknownEntity, kData);
XADL_DEFINE_ERROR(UnknownActivity, kData);
XADL_DEFINE_ERROR(CatalogError, kData);
XADL_DEFINE_ERROR(MissingLabel, kData);
XADL_DEFINE_ERROR(SchemaViolation, kData);
XADL_DEFINE_ERROR(InvalidScenario, kData);
XADL_DEFINE_ERROR(EmptyActivitySet, kData);
XADL_DEFINE_ERROR(EmptyInput, kData);
XADL_DEFINE_ERROR(ClassTooSmall, kData);
XADL_DEFINE_ERROR(UnmappedFeature, kData);
XADL_DEFINE_ERROR(TemplateError, kData);
XADL_DEFINE_ERROR(PromptTooLong, kData);
XADL_DEFINE_ERROR(IoError, kData);

// Output-extractor failures.
XADL_DEFINE_ERROR(HallucinatedLabel, kData);
XADL_DEFINE_ERROR(MissingExplanation, kData);
XADL_DEFINE_ERROR(UnparseableOutput, kData);

XADL_DEFINE_ERROR(ProviderError, kProvider);
XADL_DEFINE_ERROR(Timeout, kProvider);
XADL_DEFINE_ERROR(QueueFull, kProvider);

#undef XADL_DEFINE_ERROR

// A row that could not be parsed. Carries the 1-based line number.
class MalformedRow : public Error {
 public:
  MalformedRow(std::size_t line, const std::string& reason);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Retries were spent on transient failures. `attempts()` holds one entry
// per attempt describing what went wrong.
class RateLimitedExhausted : public Error {
 public:
  explicit RateLimitedExhausted(std::vector<std::string> attempts);
  const std::vector<std::string>& attempts() const { return attempts_; }

 private:
  std::vector<std::string> attempts_;
};

}  // namespace xadl
