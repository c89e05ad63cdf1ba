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

#include "conjbench/sampling.hpp"

#include <ctime>

#include "conjbench/clock.hpp"
#include "conjbench/digest.hpp"
#include "conjbench/error.hpp"

namespace conjbench {

std::string format_utc(Clock::time_point t) {
  const std::time_t tt = std::chrono::system_clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::vector<std::int64_t> canonical_seeds(int k) {
  if (k < 1 || k > static_cast<int>(kCanonicalSeeds.size())) {
    throw PreconditionError("k must be in [1, 10], got " + std::to_string(k));
  }
  return {kCanonicalSeeds.begin(), kCanonicalSeeds.begin() + k};
}

nlohmann::json SamplingSpec::to_json() const {
  nlohmann::json j = {{"model_id", model_id}, {"temperature", temperature}, {"seed", seed}};
  if (max_tokens) j["max_tokens"] = *max_tokens;
  return j;
}

SamplingSpec SamplingSpec::from_json(const nlohmann::json& j) {
  SamplingSpec s;
  s.model_id = j.at("model_id").get<std::string>();
  s.temperature = j.at("temperature").get<double>();
  s.seed = j.at("seed").get<std::int64_t>();
  if (const auto it = j.find("max_tokens"); it != j.end() && !it->is_null()) {
    s.max_tokens = it->get<int>();
  }
  return s;
}

SamplingSpec judge_sampling(std::string model_id) {
  SamplingSpec s;
  s.model_id = std::move(model_id);
  s.temperature = 0.0;
  s.seed = kCanonicalSeeds[0];
  return s;
}

std::string request_digest(const std::string& prompt_hash, const SamplingSpec& spec) {
  return json_digest({{"prompt", prompt_hash}, {"sampling", spec.to_json()}});
}

}  // namespace conjbench
