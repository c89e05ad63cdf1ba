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

#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "conjbench/dataset.hpp"
#include "conjbench/gateway.hpp"
#include "conjbench/prompts.hpp"

namespace conjbench {

enum class Ablation { FewShot, NoFewShot };

std::string_view to_string(Ablation a);

struct StageResult {
  PromptBundle prompt;
  Completion completion;
};

struct FireTrace {
  std::string instance_id;
  std::string cot;
  std::string lot;
  std::string combined;
  StageResult cot_stage;
  StageResult lot_stage;
  Ablation ablation = Ablation::FewShot;

  // Stage prompts are referenced by content hash.
  nlohmann::json to_json() const;
  std::string digest() const;
};

struct FireSampling {
  SamplingSpec cot;
  SamplingSpec lot;
};

// A stage produced output the pipeline cannot continue from, e.g. a CoT
// without any "- " step.
struct FireFailure {
  std::string stage;  // cot, lot or combine
  std::string message;
};

struct FireResult {
  FireTrace trace;  // stages up to the failure
  std::optional<PromptBundle> autoformalise;
  std::optional<FireFailure> failure;
};

// Variables of the autoformalisation prompt for one instance. The gold
// conjecture is bound only under Seen.
PromptVariables autoformalise_variables(const ProblemInstance& instance, Setting setting,
                                        const std::optional<std::string>& combined_hints);

class FirePipeline {
 public:
  explicit FirePipeline(Gateway& gateway) : gateway_(gateway) {}

  // Sees the informal statement only.
  StageResult generate_cot(const ProblemInstance& instance, Ablation ablation,
                           const SamplingSpec& spec);
  // Throws PreconditionError when `cot` is blank.
  StageResult generate_lot(const ProblemInstance& instance, const std::string& cot,
                           Ablation ablation, const SamplingSpec& spec);

  // CoT, then LoT, then hint assembly; returns the trace and the
  // Autoformalise{hints} prompt, with the seeds as few-shot examples unless
  // the ablation removes them. Gateway errors propagate.
  FireResult run_fire(const ProblemInstance& instance, Setting setting, const FireSampling& sampling,
                      Ablation ablation);

 private:
  Gateway& gateway_;
};

}  // namespace conjbench
