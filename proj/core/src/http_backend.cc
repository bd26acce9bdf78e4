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

#include "httplib.h"
#include "json.hpp"
#include "xadl/backends.hpp"
#include "xadl/errors.hpp"

namespace xadl {

HttpBackend::HttpBackend(HttpBackendConfig config) : config_(std::move(config)) {
  if (config_.base_url.empty()) throw InvalidParameters("HTTP backend needs a base URL");
}

std::string HttpBackend::EncodeBody(const CompletionRequest& request) {
  nlohmann::ordered_json body;
  body["model"] = request.model_id;
  body["temperature"] = request.temperature;
  body["max_tokens"] = request.max_output_tokens;
  body["messages"] = nlohmann::ordered_json::array(
      {{{"role", "system"}, {"content", request.system}},
       {{"role", "user"}, {"content", request.user}}});
  return body.dump();
}

Completion HttpBackend::DecodeBody(std::string_view body) {
  try {
    const auto doc = nlohmann::json::parse(body);
    Completion c;
    c.text = doc.at("choices").at(0).at("message").at("content").get<std::string>();
    if (auto it = doc.find("usage"); it != doc.end() && it->is_object()) {
      c.usage.prompt = it->value("prompt_tokens", std::int64_t{0});
      c.usage.completion = it->value("completion_tokens", std::int64_t{0});
    }
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw ProviderError(std::string("unexpected provider response: ") + e.what());
  }
}

BackendReply HttpBackend::Send(const CompletionRequest& request) {
  httplib::Client client(config_.base_url);
  client.set_connection_timeout(config_.timeout);
  client.set_read_timeout(config_.timeout);
  client.set_write_timeout(config_.timeout);
  httplib::Headers headers;
  if (!config_.api_key.empty()) {
    headers.emplace(config_.auth_header, config_.auth_scheme.empty()
                                             ? config_.api_key
                                             : config_.auth_scheme + " " + config_.api_key);
  }
  auto res = client.Post(config_.path, headers, EncodeBody(request), "application/json");

  BackendReply reply;
  if (!res) {
    const auto err = res.error();
    reply.outcome = (err == httplib::Error::Read || err == httplib::Error::Write ||
                     err == httplib::Error::ConnectionTimeout)
                        ? AttemptOutcome::kTimeout
                        : AttemptOutcome::kTransient;
    reply.detail = httplib::to_string(err);
    return reply;
  }
  reply.http_status = res->status;
  if (res->status >= 200 && res->status < 300) {
    reply.completion = DecodeBody(res->body);
    return reply;
  }
  if (res->status == 408) {
    reply.outcome = AttemptOutcome::kTimeout;
  } else if (res->status == 429 || res->status >= 500) {
    reply.outcome = AttemptOutcome::kTransient;
  } else {
    reply.outcome = AttemptOutcome::kFatal;
  }
  reply.detail = res->body.substr(0, 200);
  return reply;
}

}  // namespace xadl
