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

#include <chrono>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "conjbench/dataset.hpp"
#include "conjbench/gateway.hpp"
#include "conjbench/lean_runner.hpp"
#include "conjbench/metrics.hpp"
#include "conjbench/pass_at_k.hpp"

namespace conjbench {

enum class Task { Autoformalise, StandaloneConjecture };
enum class Method { Baseline, LeanFire, LeanFireNoFS };
enum class RunSetting { Seen, Unseen, NotApplicable };

std::string_view to_string(Task t);
std::string_view to_string(Method m);
std::string_view to_string(RunSetting s);
std::optional<Task> parse_task(std::string_view s);
std::optional<Method> parse_method(std::string_view s);
std::optional<RunSetting> parse_run_setting(std::string_view s);

enum class LeanMode { Live, Record, Replay };
std::string_view to_string(LeanMode m);

struct GatewayConfig {
  GatewayMode mode = GatewayMode::Replay;
  std::vector<std::filesystem::path> cassettes;  // read in order, first wins
  std::optional<std::size_t> rate_requests;
  std::chrono::milliseconds rate_interval{60000};
  RetryPolicy retry;
};

struct LeanConfig {
  LeanMode mode = LeanMode::Replay;
  std::filesystem::path workspace;
  std::vector<std::filesystem::path> outcomes;
  int workers = 0;  // 0 picks default_lean_workers()
  std::vector<std::string> command = {"lake", "env", "lean"};
  std::chrono::milliseconds typecheck_timeout{kTypecheckTimeout};
  std::chrono::milliseconds equiv_timeout{kEquivRflTimeout};
};

struct ExperimentConfig {
  std::string name = "experiment";
  Task task = Task::Autoformalise;
  std::vector<Method> methods = {Method::Baseline};
  std::vector<RunSetting> settings = {RunSetting::Seen, RunSetting::Unseen};
  std::vector<std::string> models;
  int k = 10;
  PassMode pass_mode = PassMode::FirstK;
  std::filesystem::path dataset;
  std::optional<std::vector<std::string>> instance_ids;
  std::optional<SolutionType> solution_type;
  std::string judge_model;
  std::string grader_math_model;   // defaults to judge_model
  std::string grader_judge_model;  // defaults to judge_model
  std::optional<std::string> cot_model;  // defaults to the generation model
  std::optional<std::string> lot_model;
  double temperature = kDefaultTemperature;
  std::optional<int> max_tokens;
  std::vector<Metric> metrics;  // empty picks the task default
  GatewayConfig gateway;
  std::map<std::string, EndpointConfig> endpoints;
  LeanConfig lean;
  std::optional<std::vector<std::string>> beq_command;
  int workers = 4;
  std::filesystem::path runs_dir = "runs";

  // Metrics scored for this task.
  std::vector<Metric> effective_metrics() const;

  // Fields that define the experiment's results. Paths, worker counts and
  // replay sources are left out so a run id survives moving the files.
  nlohmann::json identity() const;
};

// Task defaults: Autoformalise scores Typecheck, BEq+, Grader, ConJudge;
// StandaloneConjecture scores equiv_rfl.
std::vector<Metric> default_metrics(Task task);

// Reads the JSON config, applies `key=value` overrides (dotted keys, JSON
// values, bare strings otherwise), resolves relative paths against the
// config file's directory and validates. Throws ConfigError.
ExperimentConfig load_config(const std::filesystem::path& path,
                             const std::vector<std::string>& overrides = {});
ExperimentConfig config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);

// Applies one `a.b.c=value` override to a JSON document.
void apply_override(nlohmann::json& doc, std::string_view assignment);

// Throws ConfigError naming the first violated constraint.
void validate_config(ExperimentConfig& config);

}  // namespace conjbench
