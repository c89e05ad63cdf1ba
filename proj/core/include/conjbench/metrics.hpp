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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "conjbench/dataset.hpp"
#include "conjbench/gateway.hpp"
#include "conjbench/lean_bridge.hpp"

namespace conjbench {

enum class Metric { Typecheck, EquivRfl, ConJudge, Grader, BeqPlus };

std::string_view to_string(Metric m);
std::optional<Metric> parse_metric(std::string_view s);

enum class VerdictStatus {
  Ok,            // value is meaningful
  ParseFailure,  // judge reply had no marker; value is false
  Skipped,       // precondition of the metric not met; value is false
  NotRun,        // metric unavailable (e.g. no checker configured)
};

std::string_view to_string(VerdictStatus s);
std::optional<VerdictStatus> parse_verdict_status(std::string_view s);

struct SampleKey {
  std::string instance_id;
  std::string task;
  std::string model;
  std::string method;
  std::string setting;
  int seed_index = 0;
  std::int64_t seed = 0;

  // "task/model/method/setting/instance_id/seed_index"
  std::string str() const;
  nlohmann::json to_json() const;
  static SampleKey from_json(const nlohmann::json& j);
  bool operator==(const SampleKey&) const = default;
};

struct Verdict {
  Metric metric = Metric::Typecheck;
  bool value = false;
  VerdictStatus status = VerdictStatus::Ok;
  std::string evidence;
  SampleKey key;

  nlohmann::json to_json() const;
  static Verdict from_json(const nlohmann::json& j);
};

inline constexpr std::string_view kConJudgeMarker = "The formal statement contains the conjecture:";
inline constexpr std::string_view kGraderMarker = "The statements are equivalent:";

// Finds the last `<marker> **True**` or `<marker> **False**` in `reply`.
// Runs of whitespace in the marker match any whitespace, newlines
// included; the bold value is case-insensitive.
std::optional<bool> parse_judge_marker(std::string_view reply, std::string_view marker);

struct JudgeOutcome {
  bool value = false;
  VerdictStatus status = VerdictStatus::Ok;
  std::string evidence;
  std::vector<Completion> calls;
};

// Throws PreconditionError when `generated` is blank.
JudgeOutcome judge_conjudge(Gateway& gateway, std::string_view generated,
                            std::string_view gold_conjecture, std::string_view gold_formal_statement,
                            const SamplingSpec& spec);

// Two back-translations with the math model, then one comparison with the
// judge model. Throws PreconditionError when either text is blank.
JudgeOutcome score_grader(Gateway& gateway, std::string_view gold_formal,
                          std::string_view generated_formal, const SamplingSpec& math_spec,
                          const SamplingSpec& judge_spec);

struct AnnotatedSample {
  std::string id;
  std::string setting;
  std::string generated;
  std::string gold_conjecture;
  std::string gold_formal_statement;
  bool human = false;
};

// One JSON record per line with the fields of AnnotatedSample.
std::vector<AnnotatedSample> load_annotations(const std::filesystem::path& path);

struct CalibrationResult {
  std::size_t agreed = 0;
  std::size_t total = 0;
  std::size_t parse_failures = 0;
  std::vector<std::pair<std::string, bool>> judge_labels;  // (id, judge verdict)

  double agreement() const { return total ? static_cast<double>(agreed) / total : 0.0; }
  // Two decimals, half-up, from the exact fraction: "0.83".
  std::string display() const;
};

// Throws PreconditionError for an empty annotation set.
CalibrationResult calibrate_judge(Gateway& gateway, const std::vector<AnnotatedSample>& annotations,
                                  const SamplingSpec& spec);

struct LeanVerdict {
  bool value = false;
  VerdictStatus status = VerdictStatus::Ok;
  std::string evidence;
  std::optional<LeanJob> job;
  std::optional<LeanOutcome> outcome;
};

// Success is true; CompileError and Timeout are false. A ToolFailure
// outcome throws ToolFailure. Unbuildable inputs give false.
LeanVerdict score_equiv_rfl(LeanRunner& runner, std::string_view gold_conjecture,
                            std::string_view generated_conjecture, std::string_view header);
LeanVerdict score_typecheck(LeanRunner& runner, const ProblemInstance& instance,
                            std::string_view generated, Setting setting);

// External equivalence checker, run as `<command...> <gold_path> <generated_path>`.
// It must print `true` or `false` on one line and exit 0.
struct BeqChecker {
  std::vector<std::string> command;
  std::chrono::milliseconds timeout{std::chrono::minutes(10)};
  std::filesystem::path scratch;  // where the two files are written
};

inline constexpr std::string_view kPresupposesTypechecking = "presupposes typechecking";

// No checker: NotRun. Generated code that does not typecheck: Skipped.
// Checker crash or malformed reply throws ToolFailure. Both sources must be
// complete Lean files.
LeanVerdict score_beq_plus(const std::optional<BeqChecker>& checker, std::string_view gold_source,
                           std::string_view generated_source, bool generated_typechecks);

}  // namespace conjbench
