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

#include <filesystem>

#include "json.hpp"
#include "xadl/backends.hpp"
#include "xadl/errors.hpp"
#include "xadl/io.hpp"

namespace xadl {

FixtureStore::FixtureStore(std::string dir) : dir_(std::move(dir)) {}

std::string FixtureStore::PathFor(const CompletionRequest& request) const {
  return (std::filesystem::path(dir_) / (RequestDigest(request) + ".json")).string();
}

std::optional<Completion> FixtureStore::Find(const CompletionRequest& request) const {
  const std::string path = PathFor(request);
  if (!std::filesystem::exists(path)) return std::nullopt;
  try {
    const auto doc = nlohmann::json::parse(ReadFile(path));
    const auto& response = doc.at("response");
    Completion c;
    c.text = response.at("text").get<std::string>();
    if (auto it = response.find("usage"); it != response.end()) {
      c.usage.prompt = it->value("prompt", std::int64_t{0});
      c.usage.completion = it->value("completion", std::int64_t{0});
    }
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaViolation("bad fixture " + path + ": " + e.what());
  }
}

void FixtureStore::Save(const CompletionRequest& request, const Completion& completion) {
  nlohmann::ordered_json doc;
  doc["request"] = {{"model", request.model_id},
                    {"temperature", request.temperature},
                    {"max_output_tokens", request.max_output_tokens},
                    {"system", request.system},
                    {"user", request.user}};
  doc["response"] = {{"text", completion.text},
                     {"usage",
                      {{"prompt", completion.usage.prompt},
                       {"completion", completion.usage.completion}}}};
  std::lock_guard lock(write_mu_);
  WriteFileAtomic(PathFor(request), doc.dump(2) + "\n");
}

ReplayBackend::ReplayBackend(std::shared_ptr<FixtureStore> store) : store_(std::move(store)) {}

BackendReply ReplayBackend::Send(const CompletionRequest& request) {
  BackendReply reply;
  if (auto found = store_->Find(request)) {
    reply.completion = std::move(*found);
    return reply;
  }
  reply.outcome = AttemptOutcome::kFatal;
  reply.detail = "no fixture for request " + RequestDigest(request) + " in " + store_->dir();
  return reply;
}

RecordingBackend::RecordingBackend(std::shared_ptr<CompletionBackend> inner,
                                   std::shared_ptr<FixtureStore> store)
    : inner_(std::move(inner)), store_(std::move(store)) {}

BackendReply RecordingBackend::Send(const CompletionRequest& request) {
  BackendReply reply = inner_->Send(request);
  if (reply.outcome == AttemptOutcome::kOk) store_->Save(request, reply.completion);
  return reply;
}

}  // namespace xadl
