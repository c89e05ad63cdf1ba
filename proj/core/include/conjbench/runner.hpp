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

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "conjbench/cassette.hpp"
#include "conjbench/config.hpp"
#include "conjbench/dataset.hpp"
#include "conjbench/gateway.hpp"
#include "conjbench/lean_bridge.hpp"
#include "conjbench/metrics.hpp"
#include "conjbench/prompts.hpp"
#include "conjbench/run_store.hpp"

namespace conjbench {

// Replacements for the components a config would otherwise build; used by
// tests and fixture tooling.
struct RunnerHooks {
  ProviderResolver providers;             // live/record chat endpoints
  std::shared_ptr<LeanRunner> lean_live;  // live/record Lean checks
  Clock* clock = nullptr;
};

struct Services {
  std::shared_ptr<Cassette> cassette;
  std::shared_ptr<Gateway> gateway;
  std::shared_ptr<LeanRunner> lean;  // pooled, configured timeouts applied
  std::optional<BeqChecker> beq;
};

// Builds the chat gateway and Lean runner a config describes. Recordings
// go to `record_dir` (chat.jsonl, lean.jsonl), which is also read back.
Services make_services(const ExperimentConfig& config, const RunnerHooks& hooks,
                       const std::filesystem::path& record_dir);

struct ScoredSample {
  std::vector<Verdict> verdicts;  // one per configured metric, in config order
  nlohmann::json lean = nlohmann::json::array();
  std::vector<std::string> judge_calls;
};

// Scores one generated text with every metric of the config. A toolchain
// failure or missing recording throws.
ScoredSample score_sample(const Services& services, const ExperimentConfig& config,
                          const ProblemInstance& instance, Setting setting, std::string_view generated,
                          const SampleKey& key);

struct RunOptions {
  // Stop after this many new samples, leaving a resumable store.
  std::optional<std::size_t> limit;
};

struct RunSummary {
  std::string run_id;
  std::filesystem::path dir;
  std::size_t total = 0;     // samples in the full grid
  std::size_t existing = 0;  // already stored before this call
  std::size_t added = 0;
  bool complete = false;
  std::size_t live_calls = 0;
};

// One generation cell of the grid.
struct Cell {
  std::string model;
  Method method = Method::Baseline;
  RunSetting setting = RunSetting::Seen;
};

class Experiment {
 public:
  // Loads and filters the dataset and fixes the run id. Throws ConfigError
  // or DatasetError; writes nothing.
  explicit Experiment(ExperimentConfig config, RunnerHooks hooks = {});
  ~Experiment();

  const ExperimentConfig& config() const { return config_; }
  const std::string& run_id() const { return run_id_; }
  const std::vector<ProblemInstance>& instances() const { return instances_; }
  std::vector<Cell> cells() const;
  std::filesystem::path run_dir() const { return config_.runs_dir / run_id_; }

  // The run store's config.json content.
  nlohmann::json store_config() const;

  // Toolchain, endpoints and replay sources. Throws PreflightError.
  void preflight();

  // Preflight, then every missing sample in canonical order (cell, then
  // instance, then seed index), then the report once the grid is complete.
  // A toolchain or gateway failure stops the run, keeping every sample
  // committed before it, and throws RunError.
  RunSummary run(const RunOptions& options = {});

 private:
  struct Impl;
  ExperimentConfig config_;
  RunnerHooks hooks_;
  std::vector<ProblemInstance> instances_;
  std::string dataset_digest_;
  std::string run_id_;
  std::unique_ptr<Impl> impl_;
};

// Throws RunError if a prompt shown without the conjecture is a seen
// prompt, or if a span substituted from the instance contains its gold
// conjecture or gold formal statement (whitespace-insensitive).
void check_unseen_prompt(const PromptBundle& prompt, const ProblemInstance& instance);

// The term of the gold conjecture (text after `:=`), whitespace-normalised.
std::string gold_term(const ProblemInstance& instance);

// Whole-token occurrences of `term` in the substituted spans of a stored
// prompt, skipping spans filled from seed exemplars. Template text is never
// scanned.
std::size_t count_unmasked_occurrences(const nlohmann::json& stored_prompt, std::string_view term);

}  // namespace conjbench
