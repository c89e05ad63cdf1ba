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

#include "conjbench/leanfire.hpp"

#include "conjbench/digest.hpp"
#include "conjbench/error.hpp"
#include "conjbench/lean_text.hpp"

namespace conjbench {

std::string_view to_string(Ablation a) { return a == Ablation::FewShot ? "few_shot" : "no_few_shot"; }

namespace {

std::span<const SeedExemplar> exemplars_for(Ablation a) {
  if (a == Ablation::NoFewShot) return {};
  return seed_exemplars();
}

nlohmann::json stage_json(const StageResult& s) {
  return {{"prompt_hash", s.prompt.content_hash},
          {"request_digest", s.completion.request_digest},
          {"model_id", s.completion.model_id},
          {"seed", s.completion.sampling.seed},
          {"response", s.completion.text}};
}

}  // namespace

nlohmann::json FireTrace::to_json() const {
  return {{"instance_id", instance_id}, {"ablation", to_string(ablation)},
          {"cot", cot},                 {"lot", lot},
          {"combined", combined},       {"cot_stage", stage_json(cot_stage)},
          {"lot_stage", stage_json(lot_stage)}};
}

std::string FireTrace::digest() const { return json_digest(to_json()); }

PromptVariables autoformalise_variables(const ProblemInstance& instance, Setting setting,
                                        const std::optional<std::string>& combined_hints) {
  const auto input = strip_conjecture_for_setting(instance, setting);
  PromptVariables vars{{"query.name", instance.id},
                       {"query.informal_statement", input.informal_statement}};
  if (input.conjecture_block) vars["query.conjecture"] = *input.conjecture_block;
  if (combined_hints) vars["query.combined_cot_lot"] = *combined_hints;
  return vars;
}

StageResult FirePipeline::generate_cot(const ProblemInstance& instance, Ablation ablation,
                                       const SamplingSpec& spec) {
  TemplateId id{TemplateName::CotGen, false, ablation == Ablation::FewShot, false};
  auto prompt = render(id, {{"query.informal_statement", instance.informal_statement}},
                       exemplars_for(ablation));
  auto completion = gateway_.complete(prompt, spec);
  return {std::move(prompt), std::move(completion)};
}

StageResult FirePipeline::generate_lot(const ProblemInstance& instance, const std::string& cot,
                                       Ablation ablation, const SamplingSpec& spec) {
  if (lean::trim(cot).empty()) throw PreconditionError("LoT generation needs a non-empty CoT");
  TemplateId id{TemplateName::LotGen, false, ablation == Ablation::FewShot, false};
  auto prompt = render(id, {{"query.informal_statement", instance.informal_statement}, {"query.cot", cot}},
                       exemplars_for(ablation));
  auto completion = gateway_.complete(prompt, spec);
  return {std::move(prompt), std::move(completion)};
}

FireResult FirePipeline::run_fire(const ProblemInstance& instance, Setting setting,
                                  const FireSampling& sampling, Ablation ablation) {
  FireResult result;
  auto& trace = result.trace;
  trace.instance_id = instance.id;
  trace.ablation = ablation;

  trace.cot_stage = generate_cot(instance, ablation, sampling.cot);
  trace.cot = lean::trim(trace.cot_stage.completion.text);
  if (trace.cot.empty()) {
    result.failure = FireFailure{"cot", "empty chain of thought"};
    return result;
  }

  trace.lot_stage = generate_lot(instance, trace.cot, ablation, sampling.lot);
  trace.lot = lean::trim(trace.lot_stage.completion.text);

  try {
    trace.combined = assemble_combined_hints(trace.cot, trace.lot);
  } catch (const PreconditionError& e) {
    result.failure = FireFailure{"combine", e.what()};
    return result;
  }

  TemplateId id{TemplateName::Autoformalise, setting == Setting::Seen, ablation == Ablation::FewShot,
                true};
  result.autoformalise =
      render(id, autoformalise_variables(instance, setting, trace.combined), exemplars_for(ablation));
  return result;
}

}  // namespace conjbench
