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


#include <benchmark/benchmark.h>

#include "conjbench/prompts.hpp"

namespace {

using namespace conjbench;

const PromptVariables kVars = {{"query.name", "quad_roots"},
                               {"query.informal_statement", "What are the real roots of x^2 - 4x?"},
                               {"query.conjecture", "abbrev conjecture : Set ℝ := {0, 4}"},
                               {"query.combined_cot_lot", "- Factor.\n  Lean: `x * (x - 4)`"}};

void BM_RenderAutoformaliseFewShot(benchmark::State& state) {
  const TemplateId id{TemplateName::Autoformalise, true, true, true};
  for (auto _ : state) benchmark::DoNotOptimize(render(id, kVars, seed_exemplars()));
}
BENCHMARK(BM_RenderAutoformaliseFewShot);

void BM_RenderStandalone(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(render({TemplateName::StandaloneConjecture}, kVars));
}
BENCHMARK(BM_RenderStandalone);

void BM_AssembleHints(benchmark::State& state) {
  std::string cot, lot;
  for (int i = 0; i < state.range(0); ++i) {
    cot += "- Step " + std::to_string(i) + " of the argument.\n";
    lot += "- Lean: `step_" + std::to_string(i) + "`\n";
  }
  for (auto _ : state) benchmark::DoNotOptimize(assemble_combined_hints(cot, lot));
}
BENCHMARK(BM_AssembleHints)->Range(4, 256);

}  // namespace
