// Copyright 2026 The conjbench Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdlib>

#include <httplib.h>

#include "conjbench/error.hpp"
#include "conjbench/gateway.hpp"

namespace conjbench {

HttpChatProvider::HttpChatProvider(EndpointConfig config) : config_(std::move(config)) {
  if (config_.base_url.empty()) throw ConfigError("endpoint base_url is empty");
}

nlohmann::json HttpChatProvider::request_body(const PromptBundle& prompt,
                                              const SamplingSpec& spec) const {
  nlohmann::json body = {
      {"model", config_.remote_model.empty() ? spec.model_id : config_.remote_model},
      {"messages",
       {{{"role", "system"}, {"content", prompt.system_message}},
        {{"role", "user"}, {"content", prompt.user_message}}}},
      {"temperature", spec.temperature},
      {"seed", spec.seed},
  };
  if (spec.max_tokens) body["max_tokens"] = *spec.max_tokens;
  return body;
}

std::string HttpChatProvider::complete(const PromptBundle& prompt, const SamplingSpec& spec) {
  httplib::Client client(config_.base_url);
  client.set_read_timeout(config_.timeout);
  client.set_write_timeout(config_.timeout);
  httplib::Headers headers;
  if (!config_.api_key_env.empty()) {
    const char* key = std::getenv(config_.api_key_env.c_str());
    if (!key || !*key) throw ConfigError("environment variable " + config_.api_key_env + " is not set");
    headers.emplace("Authorization", std::string("Bearer ") + key);
  }
  const auto res = client.Post(config_.path, headers, request_body(prompt, spec).dump(),
                               "application/json");
  if (!res) throw GatewayError("HTTP request failed: " + httplib::to_string(res.error()));
  if (res->status != 200) {
    throw GatewayError("HTTP " + std::to_string(res->status) + ": " + res->body.substr(0, 500));
  }
  const auto json = nlohmann::json::parse(res->body, nullptr, false);
  if (json.is_discarded()) throw GatewayError("response is not JSON");
  try {
    return json.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw GatewayError(std::string("unexpected response shape: ") + e.what());
  }
}

}  // namespace conjbench
