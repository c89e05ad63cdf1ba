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
#include <semaphore>
#include <string>
#include <vector>

#include "conjbench/cassette.hpp"
#include "conjbench/lean_bridge.hpp"

namespace conjbench {

inline constexpr std::string_view kPinnedLeanVersion = "4.19.0-rc2";

struct LeanWorkspace {
  std::filesystem::path root;             // directory holding lakefile and lean-toolchain
  std::filesystem::path scratch = "Scratch";  // relative to root
  std::vector<std::string> command = {"lake", "env", "lean"};
};

// Compiles each job in its own scratch file named by job id, removed after
// the check.
class ProcessLeanRunner final : public LeanRunner {
 public:
  explicit ProcessLeanRunner(LeanWorkspace workspace);
  LeanOutcome run(const LeanJob& job) override;

 private:
  LeanWorkspace workspace_;
};

// Serves recorded outcomes only; an unknown job throws ToolFailure.
class ReplayLeanRunner final : public LeanRunner {
 public:
  explicit ReplayLeanRunner(std::shared_ptr<OutcomeCassette> cassette);
  LeanOutcome run(const LeanJob& job) override;

 private:
  std::shared_ptr<OutcomeCassette> cassette_;
};

// Serves recorded outcomes, otherwise runs `inner` and records the result.
// ToolFailure outcomes are never recorded.
class RecordingLeanRunner final : public LeanRunner {
 public:
  RecordingLeanRunner(std::shared_ptr<LeanRunner> inner, std::shared_ptr<OutcomeCassette> cassette);
  LeanOutcome run(const LeanJob& job) override;

 private:
  std::shared_ptr<LeanRunner> inner_;
  std::shared_ptr<OutcomeCassette> cassette_;
};

// Caps the number of jobs in flight; callers block for a slot.
class LeanPool final : public LeanRunner {
 public:
  LeanPool(std::shared_ptr<LeanRunner> inner, int workers);
  LeanOutcome run(const LeanJob& job) override;
  int workers() const { return workers_; }

 private:
  std::shared_ptr<LeanRunner> inner_;
  int workers_;
  std::counting_semaphore<> slots_;
};

// Physical cores / 2, at least 1.
int default_lean_workers();

struct ToolchainReport {
  std::string pinned;        // content of lean-toolchain
  std::string version_line;  // first line printed by `lean --version`
};

// Checks that the workspace pins the expected toolchain and that `lean`
// runs inside it. Throws ToolFailure with the reason otherwise.
ToolchainReport check_toolchain(const LeanWorkspace& workspace,
                                std::string_view expected_version = kPinnedLeanVersion);

}  // namespace conjbench
