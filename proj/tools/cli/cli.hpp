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

#include <exception>
#include <ostream>
#include <string>
#include <vector>

#include "conjbench/runner.hpp"

namespace conjbench::cli {

// Process exit statuses. Stable; scripts branch on them.
enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kUsage = 2,
  kConfigError = 3,
  kPreflightFailure = 4,
  kRunFailure = 5,
  kIncompleteRun = 6,
};

// Maps a library exception to its exit status.
int exit_code_for(const std::exception& e);

// Runs one command line (args excludes the program name). `hooks` replace
// config-built endpoints and Lean runners.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
             const RunnerHooks& hooks = {});

}  // namespace conjbench::cli
