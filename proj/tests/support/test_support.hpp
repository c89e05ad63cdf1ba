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

#include <atomic>
#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "conjbench/clock.hpp"
#include "conjbench/dataset.hpp"
#include "conjbench/gateway.hpp"
#include "conjbench/lean_bridge.hpp"

namespace conjbench::testing {

std::filesystem::path fixtures_dir();
std::string slurp(const std::filesystem::path& path);
void spit(const std::filesystem::path& path, const std::string& content);

// Fresh directory removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& rel) const { return path_ / rel; }

 private:
  std::filesystem::path path_;
};

// Starts at 2026-01-01T00:00:00Z; sleep_for advances time instead of
// blocking. Each now() advances by `tick`.
class FakeClock final : public Clock {
 public:
  explicit FakeClock(duration tick = duration::zero()) : tick_(tick) {}
  time_point now() override;
  void sleep_for(duration d) override;
  duration slept() const;

 private:
  mutable std::mutex mu_;
  time_point t_{std::chrono::seconds(1767225600)};
  duration tick_;
  duration slept_{0};
};

// Answers with a function of the prompt; counts calls.
class ScriptedProvider final : public ChatProvider {
 public:
  using Fn = std::function<std::string(const PromptBundle&, const SamplingSpec&)>;
  explicit ScriptedProvider(Fn fn) : fn_(std::move(fn)) {}
  std::string complete(const PromptBundle& prompt, const SamplingSpec& spec) override;
  int calls() const { return calls_.load(); }

 private:
  Fn fn_;
  std::atomic<int> calls_{0};
};

ProviderResolver resolve_all(std::shared_ptr<ChatProvider> provider);

// Returns a fixed outcome per job, chosen by a predicate over the source.
class ScriptedLean final : public LeanRunner {
 public:
  using Fn = std::function<LeanOutcome(const LeanJob&)>;
  explicit ScriptedLean(Fn fn) : fn_(std::move(fn)) {}
  LeanOutcome run(const LeanJob& job) override;
  int calls() const { return calls_.load(); }
  std::vector<LeanJob> jobs() const;

 private:
  Fn fn_;
  std::atomic<int> calls_{0};
  mutable std::mutex mu_;
  std::vector<LeanJob> jobs_;
};

LeanOutcome lean_success();
LeanOutcome lean_error(std::string message);

ProblemInstance quad_roots();
ProblemInstance proof_instance();

// Text of the substituted span `name` of a rendered prompt.
std::string region_text(const PromptBundle& prompt, std::string_view name);

}  // namespace conjbench::testing
