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

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <memory>
#include <mutex>
#include <random>
#include <string>
#include <vector>

#include "xadl/model.hpp"

namespace xadl {

struct CompletionRequest {
  std::string system;
  std::string user;
  std::string model_id = "gpt-4o";
  double temperature = 0.0;
  int max_output_tokens = 1024;
};

// SHA-256 over a canonical JSON encoding of every request field. Keys the
// fixture store.
std::string RequestDigest(const CompletionRequest& request);

struct Completion {
  std::string text;
  TokenUsage usage;

  bool operator==(const Completion&) const = default;
};

enum class AttemptOutcome { kOk, kTransient, kFatal, kTimeout };

struct BackendReply {
  AttemptOutcome outcome = AttemptOutcome::kOk;
  Completion completion;  // valid when outcome == kOk
  int http_status = 0;
  std::string detail;
};

// One provider round trip, no retries. Implementations must be safe to
// call from several threads at once.
class CompletionBackend {
 public:
  virtual ~CompletionBackend() = default;
  virtual BackendReply Send(const CompletionRequest& request) = 0;
};

class Clock {
 public:
  virtual ~Clock() = default;
  virtual Duration Now() = 0;
  virtual void SleepFor(Duration d) = 0;
};

class SteadyClock final : public Clock {
 public:
  Duration Now() override;
  void SleepFor(Duration d) override;
};

// Virtual time: SleepFor advances Now() instantly and records the delay.
class SimulatedClock final : public Clock {
 public:
  Duration Now() override;
  void SleepFor(Duration d) override;
  std::vector<Duration> sleeps() const;

 private:
  mutable std::mutex mu_;
  Duration now_{0};
  std::vector<Duration> sleeps_;
};

struct GatewayPolicy {
  int max_concurrent_requests = 8;
  int max_retries = 5;
  Duration base_backoff = std::chrono::seconds(1);
  double backoff_multiplier = 2.0;
  std::size_t queue_capacity = 1024;   // callers allowed to wait for a slot
  int requests_per_minute = 500;
  std::int64_t tokens_per_minute = 2'000'000;
  std::uint64_t jitter_seed = 0;

  // Throws InvalidParameters unless every field is positive and the
  // multiplier is >= 1.
  void Validate() const;
};

// Delay before retry number `retry` (0-based) without jitter:
// base · multiplier^retry.
Duration BackoffDelay(const GatewayPolicy& policy, int retry);

struct GatewayStats {
  std::uint64_t requests = 0;
  std::uint64_t attempts = 0;
  std::uint64_t retries = 0;
  int max_in_flight = 0;
};

// Shareable front door to a backend: FIFO admission queue, concurrency
// bound, per-minute request/token ceilings and retries with exponential
// backoff plus uniform jitter in [0, base).
class Gateway {
 public:
  Gateway(std::shared_ptr<CompletionBackend> backend, GatewayPolicy policy = {},
          std::shared_ptr<Clock> clock = std::make_shared<SteadyClock>());

  // Blocks until done. Throws QueueFull, ProviderError, Timeout or
  // RateLimitedExhausted.
  Completion Complete(const CompletionRequest& request);

  GatewayStats stats() const;
  const GatewayPolicy& policy() const { return policy_; }

 private:
  void Admit();
  void Release();
  void AcquireRate(std::int64_t tokens);
  Duration Jitter();

  std::shared_ptr<CompletionBackend> backend_;
  GatewayPolicy policy_;
  std::shared_ptr<Clock> clock_;

  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::uint64_t next_ticket_ = 0;
  std::uint64_t now_serving_ = 0;
  int in_flight_ = 0;
  GatewayStats stats_;

  std::mutex rate_mu_;
  std::deque<std::pair<Duration, std::int64_t>> recent_;  // (sent at, tokens)
  std::int64_t recent_tokens_ = 0;

  std::mutex rng_mu_;
  std::mt19937_64 rng_;
};

}  // namespace xadl
