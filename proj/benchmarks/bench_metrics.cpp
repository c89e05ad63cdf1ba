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

#include <random>

#include "conjbench/metrics.hpp"
#include "conjbench/pass_at_k.hpp"

namespace {

using namespace conjbench;

void BM_ParseJudgeMarker(benchmark::State& state) {
  std::string reply(static_cast<std::size_t>(state.range(0)), 'a');
  reply += "\nThe formal statement contains the conjecture: **True**";
  for (auto _ : state) benchmark::DoNotOptimize(parse_judge_marker(reply, kConJudgeMarker));
}
BENCHMARK(BM_ParseJudgeMarker)->Range(64, 1 << 14);

void BM_PassAtK(benchmark::State& state) {
  std::mt19937 rng(7);
  std::vector<InstanceVerdicts> insts(static_cast<std::size_t>(state.range(0)));
  for (std::size_t i = 0; i < insts.size(); ++i) {
    insts[i].instance_id = std::to_string(i);
    insts[i].solution_type = static_cast<SolutionType>(i % 3);
    for (int s = 0; s < 10; ++s) insts[i].values.push_back(rng() % 5 == 0);
  }
  for (auto _ : state) {
    for (int k = 1; k <= 10; ++k) benchmark::DoNotOptimize(aggregate_pass_at_k(insts, Metric::ConJudge, k, {}));
  }
}
BENCHMARK(BM_PassAtK)->Arg(457);

}  // namespace
