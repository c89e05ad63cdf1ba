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

#pragma once

#include <atomic>
#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include "conjbench/cassette.hpp"
#include "conjbench/clock.hpp"
#include "conjbench/prompts.hpp"
#include "conjbench/rate_limiter.hpp"
#include "conjbench/sampling.hpp"

namespace conjbench {

// A chat endpoint: one system + user exchange per call, no streaming.
class ChatProvider {
 public:
  virtual ~ChatProvider() = default;
  // Throws on transport or protocol failure; the gateway retries.
  virtual std::string complete(const PromptBundle& prompt, const SamplingSpec& spec) = 0;
};

struct EndpointConfig {
  std::string base_url;                  // e.g. "https://api.openai.com"
  std::string path = "/v1/chat/completions";
  std::string api_key_env;               // name of the variable holding the key
  std::string remote_model;              // defaults to the model id
  std::chrono::seconds timeout{300};
};

// OpenAI-compatible chat-completions client. Sends exactly temperature and
// seed (plus max_tokens when set); everything else stays provider default.
class HttpChatProvider final : public ChatProvider {
 public:
  explicit HttpChatProvider(EndpointConfig config);
  std::string complete(const PromptBundle& prompt, const SamplingSpec& spec) override;

  // The request body this provider would send; exposed for tests.
  nlohmann::json request_body(const PromptBundle& prompt, const SamplingSpec& spec) const;

 private:
  EndpointConfig config_;
};

enum class GatewayMode {
  Live,    // call endpoints, keep nothing
  Record,  // serve recorded entries, call and record on a miss
  Replay,  // serve recorded entries only; a miss is an error
};

std::string_view to_string(GatewayMode m);
std::optional<GatewayMode> parse_gateway_mode(std::string_view s);

struct RetryPolicy {
  int max_retries = 3;
  std::chrono::milliseconds initial_backoff{1000};
  double multiplier = 2.0;
};

// Returns the provider serving a model id, or nullptr if none is configured.
using ProviderResolver = std::function<std::shared_ptr<ChatProvider>(const std::string& model_id)>;

class Gateway {
 public:
  struct Options {
    GatewayMode mode = GatewayMode::Replay;
    RetryPolicy retry;
    std::shared_ptr<RateLimiter> limiter;  // optional; applies to live calls only
    Clock* clock = nullptr;                // defaults to the system clock
  };

  Gateway(Options options, std::shared_ptr<Cassette> cassette, ProviderResolver resolver);

  // Safe to call concurrently.
  Completion complete(const PromptBundle& prompt, const SamplingSpec& spec);

  GatewayMode mode() const { return options_.mode; }
  std::size_t live_calls() const { return live_calls_.load(); }

 private:
  Completion from_entry(const nlohmann::json& entry, const SamplingSpec& spec) const;
  Completion call_live(const PromptBundle& prompt, const SamplingSpec& spec,
                       const std::string& digest);

  Options options_;
  Clock& clock_;
  std::shared_ptr<Cassette> cassette_;
  ProviderResolver resolver_;
  std::atomic<std::size_t> live_calls_{0};
};

}  // namespace conjbench
