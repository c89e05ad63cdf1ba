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
#include <string>
#include <vector>

namespace conjbench {

struct ProcessResult {
  int exit_code = -1;       // valid when the process exited normally
  int term_signal = 0;      // nonzero when killed by a signal
  bool timed_out = false;   // killed by us at the deadline
  bool spawn_failed = false;
  std::string output;       // stdout and stderr, interleaved
  std::chrono::milliseconds wall_time{0};
};

// Runs argv[0] (looked up on PATH) in `cwd` with stdin closed. On timeout
// the whole process group is killed. Never throws for child failures.
ProcessResult run_process(const std::vector<std::string>& argv, const std::filesystem::path& cwd,
                          std::chrono::milliseconds timeout);

}  // namespace conjbench
