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

#include <array>
#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace conjbench {

// The ten generation seeds, in canonical order. Seed index i of a sample
// always maps to kCanonicalSeeds[i].
inline constexpr std::array<std::int64_t, 10> kCanonicalSeeds = {5049, 891,  1065, 4894, 3277,
                                                                 8476, 8192, 688,  377,  3568};
inline constexpr double kDefaultTemperature = 0.7;

// First k canonical seeds. Throws PreconditionError unless 1 <= k <= 10.
std::vector<std::int64_t> canonical_seeds(int k);

struct SamplingSpec {
  std::string model_id;
  double temperature = kDefaultTemperature;
  std::int64_t seed = kCanonicalSeeds[0];
  std::optional<int> max_tokens;

  nlohmann::json to_json() const;
  static SamplingSpec from_json(const nlohmann::json& j);
  bool operator==(const SamplingSpec&) const = default;
};

// Judges sample once at temperature 0 with the first canonical seed.
SamplingSpec judge_sampling(std::string model_id);

// Identity of one chat request: a pure function of the prompt hash and the
// sampling spec.
std::string request_digest(const std::string& prompt_hash, const SamplingSpec& spec);

struct Completion {
  std::string text;
  std::string model_id;
  SamplingSpec sampling;
  std::chrono::milliseconds latency{0};
  bool cache_hit = false;
  std::string request_digest;
  // When the response was produced; replayed completions keep the original.
  std::string recorded_at;
};

}  // namespace conjbench
