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

#include "conjbench/gateway.hpp"

#include <cmath>

#include "conjbench/error.hpp"

namespace conjbench {

std::string_view to_string(GatewayMode m) {
  switch (m) {
    case GatewayMode::Live:
      return "live";
    case GatewayMode::Record:
      return "record";
    case GatewayMode::Replay:
      return "replay";
  }
  return "?";
}

std::optional<GatewayMode> parse_gateway_mode(std::string_view s) {
  if (s == "live") return GatewayMode::Live;
  if (s == "record") return GatewayMode::Record;
  if (s == "replay") return GatewayMode::Replay;
  return std::nullopt;
}

Gateway::Gateway(Options options, std::shared_ptr<Cassette> cassette, ProviderResolver resolver)
    : options_(std::move(options)),
      clock_(options_.clock ? *options_.clock : SystemClock::instance()),
      cassette_(std::move(cassette)),
      resolver_(std::move(resolver)) {
  if (options_.mode != GatewayMode::Live && !cassette_) {
    throw ConfigError("record and replay modes need a cassette");
  }
  if (options_.mode == GatewayMode::Record && !cassette_->writable()) {
    throw ConfigError("record mode needs a writable cassette");
  }
}

Completion Gateway::from_entry(const nlohmann::json& entry, const SamplingSpec& spec) const {
  Completion c;
  c.text = entry.at("response").get<std::string>();
  c.model_id = spec.model_id;
  c.sampling = spec;
  c.latency = std::chrono::milliseconds(entry.value("latency_ms", 0));
  c.cache_hit = true;
  c.request_digest = entry.at("request_digest").get<std::string>();
  c.recorded_at = entry.value("recorded_at", "");
  return c;
}

Completion Gateway::complete(const PromptBundle& prompt, const SamplingSpec& spec) {
  const auto digest = request_digest(prompt.content_hash, spec);
  if (options_.mode != GatewayMode::Live) {
    if (auto entry = cassette_->find(digest)) return from_entry(*entry, spec);
    if (options_.mode == GatewayMode::Replay) throw ReplayMiss(digest);
  }
  auto completion = call_live(prompt, spec, digest);
  if (options_.mode == GatewayMode::Record) {
    cassette_->append({{"request_digest", digest},
                       {"model_id", spec.model_id},
                       {"system", prompt.system_message},
                       {"user", prompt.user_message},
                       {"template", prompt.template_id.describe()},
                       {"sampling", spec.to_json()},
                       {"response", completion.text},
                       {"latency_ms", completion.latency.count()},
                       {"recorded_at", completion.recorded_at}});
  }
  return completion;
}

Completion Gateway::call_live(const PromptBundle& prompt, const SamplingSpec& spec,
                              const std::string& digest) {
  auto provider = resolver_ ? resolver_(spec.model_id) : nullptr;
  if (!provider) throw ConfigError("no endpoint configured for model `" + spec.model_id + "`");
  std::string last_error;
  auto backoff = std::chrono::duration_cast<Clock::duration>(options_.retry.initial_backoff);
  for (int attempt = 0; attempt <= options_.retry.max_retries; ++attempt) {
    if (attempt > 0) {
      clock_.sleep_for(backoff);
      backoff = std::chrono::duration_cast<Clock::duration>(backoff * options_.retry.multiplier);
    }
    if (options_.limiter) options_.limiter->acquire();
    const auto start = clock_.now();
    try {
      ++live_calls_;
      Completion c;
      c.text = provider->complete(prompt, spec);
      const auto end = clock_.now();
      c.model_id = spec.model_id;
      c.sampling = spec;
      c.latency = std::chrono::duration_cast<std::chrono::milliseconds>(end - start);
      c.cache_hit = false;
      c.request_digest = digest;
      c.recorded_at = format_utc(end);
      return c;
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      last_error = e.what();
    }
  }
  throw GatewayError("model `" + spec.model_id + "` failed after " +
                     std::to_string(options_.retry.max_retries + 1) + " attempts: " + last_error);
}

}  // namespace conjbench
