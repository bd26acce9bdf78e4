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

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "xadl/gateway.hpp"

namespace xadl {

// Chat-completion provider over HTTP(S):
//
//   POST {base_url}{path}
//   {auth_header}: {auth_scheme} {api_key}
//   {"model": ..., "temperature": ..., "max_tokens": ...,
//    "messages": [{"role": "system", ...}, {"role": "user", ...}]}
//
// The reply text is choices[0].message.content; usage.prompt_tokens and
// usage.completion_tokens fill TokenUsage. 408 maps to a timeout; 429 and
// 5xx are transient; any other non-2xx is fatal.
struct HttpBackendConfig {
  std::string base_url = "https://api.openai.com";
  std::string path = "/v1/chat/completions";
  std::string api_key;
  std::string auth_header = "Authorization";
  std::string auth_scheme = "Bearer";
  Duration timeout = std::chrono::seconds(60);
};

class HttpBackend final : public CompletionBackend {
 public:
  explicit HttpBackend(HttpBackendConfig config);
  BackendReply Send(const CompletionRequest& request) override;

  // Request body the backend sends; exposed for tests and fixtures.
  static std::string EncodeBody(const CompletionRequest& request);
  // Parses a 2xx body. Throws ProviderError on an unexpected shape.
  static Completion DecodeBody(std::string_view body);

 private:
  HttpBackendConfig config_;
};

// Directory of "<request digest>.json" files:
//
//   {"request": {"model": ..., "temperature": ..., "max_output_tokens": ...,
//                "system": ..., "user": ...},
//    "response": {"text": ..., "usage": {"prompt": n, "completion": n}}}
class FixtureStore {
 public:
  explicit FixtureStore(std::string dir);

  std::optional<Completion> Find(const CompletionRequest& request) const;
  // Atomic write; overwrites an existing fixture for the same digest.
  void Save(const CompletionRequest& request, const Completion& completion);
  std::string PathFor(const CompletionRequest& request) const;
  const std::string& dir() const { return dir_; }

 private:
  std::string dir_;
  std::mutex write_mu_;
};

// Serves recorded fixtures; a request without one is a fatal reply.
class ReplayBackend final : public CompletionBackend {
 public:
  explicit ReplayBackend(std::shared_ptr<FixtureStore> store);
  BackendReply Send(const CompletionRequest& request) override;

 private:
  std::shared_ptr<FixtureStore> store_;
};

// Forwards to `inner` and records every successful reply.
class RecordingBackend final : public CompletionBackend {
 public:
  RecordingBackend(std::shared_ptr<CompletionBackend> inner, std::shared_ptr<FixtureStore> store);
  BackendReply Send(const CompletionRequest& request) override;

 private:
  std::shared_ptr<CompletionBackend> inner_;
  std::shared_ptr<FixtureStore> store_;
};

// Offline backend. Looks the request digest up in an in-memory fixture
// table first, then asks the responder. Bit-deterministic as long as the
// responder is.
class MockBackend final : public CompletionBackend {
 public:
  using Responder = std::function<Completion(const CompletionRequest&)>;

  MockBackend() = default;
  explicit MockBackend(Responder responder) : responder_(std::move(responder)) {}

  void AddFixture(const CompletionRequest& request, Completion completion);
  BackendReply Send(const CompletionRequest& request) override;

 private:
  std::map<std::string, Completion> fixtures_;
  Responder responder_;
};

// Responder that answers like an LLM keyed on sensor labels. It parses the
// window JSON embedded in the user prompt, totals the duration of every
// state whose label has a rule, and names the activity of the dominant one
// (ties: earliest first interval, then label). Explainer prompts (those
// with a "Predicted activity:" line) get an explanation-only envelope.
//
// Rules file: {"rules": [{"label": "...", "activity": "..."}, ...],
//              "fallback_activity": "..."}   (fallback optional)
class RuleResponder {
 public:
  struct Rule {
    std::string label;
    std::string activity;
  };

  explicit RuleResponder(std::vector<Rule> rules, std::optional<std::string> fallback = {});
  static RuleResponder FromJson(std::string_view json_text);
  static RuleResponder Load(const std::string& path);
  std::string ToJson() const;

  Completion operator()(const CompletionRequest& request) const;

 private:
  std::vector<Rule> rules_;
  std::optional<std::string> fallback_;
};

}  // namespace xadl
