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

#include "xadl/gateway.hpp"

#include <cmath>
#include <thread>

#include "json.hpp"
#include "xadl/digest.hpp"
#include "xadl/errors.hpp"
#include "xadl/prompts.hpp"
#include "xadl/rng.hpp"

namespace xadl {

std::string RequestDigest(const CompletionRequest& request) {
  nlohmann::ordered_json doc;
  doc["model"] = request.model_id;
  doc["temperature"] = request.temperature;
  doc["max_output_tokens"] = request.max_output_tokens;
  doc["system"] = request.system;
  doc["user"] = request.user;
  return Sha256Hex(doc.dump());
}

Duration SteadyClock::Now() {
  return std::chrono::duration_cast<Duration>(
      std::chrono::steady_clock::now().time_since_epoch());
}

void SteadyClock::SleepFor(Duration d) { std::this_thread::sleep_for(d); }

Duration SimulatedClock::Now() {
  std::lock_guard lock(mu_);
  return now_;
}

void SimulatedClock::SleepFor(Duration d) {
  std::lock_guard lock(mu_);
  now_ += d;
  sleeps_.push_back(d);
}

std::vector<Duration> SimulatedClock::sleeps() const {
  std::lock_guard lock(mu_);
  return sleeps_;
}

void GatewayPolicy::Validate() const {
  if (max_concurrent_requests <= 0 || max_retries < 0 || base_backoff.count() <= 0 ||
      queue_capacity == 0 || requests_per_minute <= 0 || tokens_per_minute <= 0) {
    throw InvalidParameters("gateway policy values must be positive");
  }
  if (!(backoff_multiplier >= 1.0)) {
    throw InvalidParameters("backoff multiplier must be >= 1");
  }
}

Duration BackoffDelay(const GatewayPolicy& policy, int retry) {
  const double ms = static_cast<double>(policy.base_backoff.count()) *
                    std::pow(policy.backoff_multiplier, retry);
  return Duration(std::llround(ms));
}

Gateway::Gateway(std::shared_ptr<CompletionBackend> backend, GatewayPolicy policy,
                 std::shared_ptr<Clock> clock)
    : backend_(std::move(backend)),
      policy_(policy),
      clock_(std::move(clock)),
      rng_(policy.jitter_seed) {
  policy_.Validate();
  if (!backend_) throw InvalidParameters("gateway needs a backend");
}

void Gateway::Admit() {
  std::unique_lock lock(mu_);
  if (next_ticket_ - now_serving_ >= policy_.queue_capacity) {
    throw QueueFull("request queue is full (" + std::to_string(policy_.queue_capacity) + ")");
  }
  const std::uint64_t ticket = next_ticket_++;
  cv_.wait(lock, [&] {
    return ticket == now_serving_ && in_flight_ < policy_.max_concurrent_requests;
  });
  ++now_serving_;
  ++in_flight_;
  ++stats_.requests;
  stats_.max_in_flight = std::max(stats_.max_in_flight, in_flight_);
  cv_.notify_all();
}

void Gateway::Release() {
  {
    std::lock_guard lock(mu_);
    --in_flight_;
  }
  cv_.notify_all();
}

void Gateway::AcquireRate(std::int64_t tokens) {
  const Duration window = std::chrono::minutes(1);
  while (true) {
    Duration wait{0};
    {
      std::lock_guard lock(rate_mu_);
      const Duration now = clock_->Now();
      while (!recent_.empty() && recent_.front().first + window <= now) {
        recent_tokens_ -= recent_.front().second;
        recent_.pop_front();
      }
      const bool under_requests =
          static_cast<int>(recent_.size()) < policy_.requests_per_minute;
      const bool under_tokens =
          recent_.empty() || recent_tokens_ + tokens <= policy_.tokens_per_minute;
      if (under_requests && under_tokens) {
        recent_.emplace_back(now, tokens);
        recent_tokens_ += tokens;
        return;
      }
      wait = recent_.front().first + window - now;
    }
    clock_->SleepFor(std::max(wait, Duration(1)));
  }
}

Duration Gateway::Jitter() {
  std::lock_guard lock(rng_mu_);
  return Duration(static_cast<std::int64_t>(
      UniformIndex(rng_, static_cast<std::uint64_t>(policy_.base_backoff.count()))));
}

Completion Gateway::Complete(const CompletionRequest& request) {
  if (request.system.empty() || request.user.empty()) {
    throw InvalidParameters("completion request needs system and user text");
  }
  Admit();
  struct SlotGuard {
    Gateway* g;
    ~SlotGuard() { g->Release(); }
  } guard{this};

  const std::int64_t tokens =
      static_cast<std::int64_t>(EstimateTokens(request.system) + EstimateTokens(request.user)) +
      request.max_output_tokens;
  std::vector<std::string> log;
  AttemptOutcome last = AttemptOutcome::kOk;
  for (int attempt = 0; attempt <= policy_.max_retries; ++attempt) {
    AcquireRate(tokens);
    {
      std::lock_guard lock(mu_);
      ++stats_.attempts;
      if (attempt > 0) ++stats_.retries;
    }
    BackendReply reply;
    try {
      reply = backend_->Send(request);
    } catch (const Error&) {
      throw;
    } catch (const std::exception& e) {
      throw ProviderError(std::string("backend failure: ") + e.what());
    }
    switch (reply.outcome) {
      case AttemptOutcome::kOk:
        return reply.completion;
      case AttemptOutcome::kFatal:
        throw ProviderError("provider rejected request" +
                            (reply.http_status ? " (HTTP " + std::to_string(reply.http_status) + ")"
                                               : std::string()) +
                            (reply.detail.empty() ? "" : ": " + reply.detail));
      case AttemptOutcome::kTransient:
      case AttemptOutcome::kTimeout:
        break;
    }
    last = reply.outcome;
    log.push_back((reply.outcome == AttemptOutcome::kTimeout ? "timeout" : "transient") +
                  (reply.http_status ? " HTTP " + std::to_string(reply.http_status) : std::string()) +
                  (reply.detail.empty() ? "" : " " + reply.detail));
    if (attempt == policy_.max_retries) break;
    clock_->SleepFor(BackoffDelay(policy_, attempt) + Jitter());
  }
  if (last == AttemptOutcome::kTimeout) {
    throw Timeout("request timed out after " + std::to_string(log.size()) + " attempts");
  }
  throw RateLimitedExhausted(std::move(log));
}

GatewayStats Gateway::stats() const {
  std::lock_guard lock(mu_);
  return stats_;
}

}  // namespace xadl
