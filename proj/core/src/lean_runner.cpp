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

#include "conjbench/lean_runner.hpp"

#include <fstream>
#include <thread>

#include "conjbench/error.hpp"
#include "conjbench/lean_text.hpp"
#include "conjbench/subprocess.hpp"

namespace conjbench {

ProcessLeanRunner::ProcessLeanRunner(LeanWorkspace workspace) : workspace_(std::move(workspace)) {
  if (workspace_.command.empty()) throw ConfigError("empty Lean command");
}

LeanOutcome ProcessLeanRunner::run(const LeanJob& job) {
  const auto dir = workspace_.root / workspace_.scratch;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  const auto file = dir / (job.job_id + ".lean");
  {
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    out << job.source;
    if (!out) {
      LeanOutcome o;
      o.messages.push_back({"error", "cannot write scratch file " + file.string(), 0, 0});
      return o;
    }
  }
  auto argv = workspace_.command;
  argv.push_back(std::filesystem::relative(file, workspace_.root).string());
  const auto r = run_process(argv, workspace_.root, job.timeout);
  std::filesystem::remove(file, ec);
  return classify_outcome(r.exit_code, r.term_signal != 0, r.timed_out, r.spawn_failed, r.output,
                          r.wall_time);
}

ReplayLeanRunner::ReplayLeanRunner(std::shared_ptr<OutcomeCassette> cassette)
    : cassette_(std::move(cassette)) {}

LeanOutcome ReplayLeanRunner::run(const LeanJob& job) {
  const auto entry = cassette_->find(job.job_id);
  if (!entry) throw ToolFailure("no recorded Lean outcome for job " + job.job_id);
  return LeanOutcome::from_json(entry->at("outcome"));
}

RecordingLeanRunner::RecordingLeanRunner(std::shared_ptr<LeanRunner> inner,
                                         std::shared_ptr<OutcomeCassette> cassette)
    : inner_(std::move(inner)), cassette_(std::move(cassette)) {}

LeanOutcome RecordingLeanRunner::run(const LeanJob& job) {
  if (const auto entry = cassette_->find(job.job_id)) {
    return LeanOutcome::from_json(entry->at("outcome"));
  }
  auto outcome = inner_->run(job);
  if (outcome.status != LeanStatus::ToolFailure) {
    cassette_->append({{"job_id", job.job_id},
                       {"kind", to_string(job.kind)},
                       {"source", job.source},
                       {"outcome", outcome.to_json()}});
  }
  return outcome;
}

LeanPool::LeanPool(std::shared_ptr<LeanRunner> inner, int workers)
    : inner_(std::move(inner)), workers_(workers), slots_(workers) {
  if (workers < 1) throw ConfigError("Lean pool needs at least one worker");
}

LeanOutcome LeanPool::run(const LeanJob& job) {
  slots_.acquire();
  struct Release {
    std::counting_semaphore<>& s;
    ~Release() { s.release(); }
  } release{slots_};
  return inner_->run(job);
}

int default_lean_workers() {
  const unsigned hw = std::thread::hardware_concurrency();
  // hardware_concurrency counts hyperthreads; assume two per core.
  return std::max(1, static_cast<int>(hw / 4));
}

ToolchainReport check_toolchain(const LeanWorkspace& workspace, std::string_view expected_version) {
  ToolchainReport report;
  const auto pin_path = workspace.root / "lean-toolchain";
  std::ifstream pin(pin_path);
  if (!pin) throw ToolFailure("missing toolchain pin " + pin_path.string());
  std::string pinned((std::istreambuf_iterator<char>(pin)), std::istreambuf_iterator<char>());
  report.pinned = lean::trim(pinned);
  if (report.pinned.find(expected_version) == std::string::npos) {
    throw ToolFailure("workspace pins `" + report.pinned + "`, expected " + std::string(expected_version));
  }
  auto argv = workspace.command;
  argv.push_back("--version");
  const auto r = run_process(argv, workspace.root, std::chrono::seconds(120));
  if (r.spawn_failed) throw ToolFailure("cannot run " + argv.front() + ": " + r.output);
  if (r.timed_out) throw ToolFailure("`lean --version` timed out");
  if (r.exit_code != 0) {
    throw ToolFailure("`lean --version` exited with status " + std::to_string(r.exit_code) + ": " +
                      lean::trim(r.output));
  }
  report.version_line = lean::trim(r.output.substr(0, r.output.find('\n')));
  if (report.version_line.find(expected_version) == std::string::npos) {
    throw ToolFailure("toolchain reports `" + report.version_line + "`, expected " +
                      std::string(expected_version));
  }
  return report;
}

}  // namespace conjbench
