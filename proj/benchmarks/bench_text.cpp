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

#include "conjbench/digest.hpp"
#include "conjbench/lean_bridge.hpp"
#include "conjbench/lean_text.hpp"

namespace {

using namespace conjbench;

std::string completion(int blocks) {
  std::string out = "Here is my reasoning.\n";
  for (int i = 0; i < blocks; ++i) {
    out += "```lean\nabbrev conjecture : ℕ := " + std::to_string(i) +
           "\ntheorem t : conjecture = conjecture := sorry\n```\nSome prose.\n";
  }
  return out;
}

void BM_ExtractCode(benchmark::State& state) {
  const auto text = completion(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(extract_code(text));
  state.SetBytesProcessed(static_cast<int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_ExtractCode)->Range(1, 64);

void BM_RenameIdentifier(benchmark::State& state) {
  const auto text = completion(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(lean::rename_identifier(text, "conjecture", "conjecture_model"));
}
BENCHMARK(BM_RenameIdentifier)->Range(1, 64);

void BM_Sha256(benchmark::State& state) {
  const std::string data(static_cast<std::size_t>(state.range(0)), 'x');
  for (auto _ : state) benchmark::DoNotOptimize(sha256_hex(data));
  state.SetBytesProcessed(static_cast<int64_t>(state.iterations() * data.size()));
}
BENCHMARK(BM_Sha256)->Range(64, 1 << 16);

void BM_ParseDiagnostics(benchmark::State& state) {
  std::string out;
  for (int i = 0; i < state.range(0); ++i) {
    out += "Scratch/x.lean:" + std::to_string(i) + ":4: error: type mismatch\n  expected ℕ\n";
  }
  for (auto _ : state) benchmark::DoNotOptimize(parse_diagnostics(out));
}
BENCHMARK(BM_ParseDiagnostics)->Range(1, 256);

}  // namespace
