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
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "conjbench/lean_bridge.hpp"
#include "conjbench/metrics.hpp"
#include "conjbench/prompts.hpp"

namespace conjbench {

struct SampleRecord {
  SampleKey key;
  std::string solution_type;
  // Stage name ("generation", "cot", "lot") to prompt content hash.
  std::map<std::string, std::string> prompt_hashes;
  std::string completion_text;
  std::string request_digest;
  std::string recorded_at;
  long long latency_ms = 0;
  std::optional<nlohmann::json> fire;
  std::optional<ExtractedCode> extracted;
  std::optional<nlohmann::json> failure;  // {stage, message}
  nlohmann::json lean = nlohmann::json::array();
  std::vector<std::string> judge_calls;
  std::vector<Verdict> verdicts;

  nlohmann::json to_json() const;
  static SampleRecord from_json(const nlohmann::json& j);
};

// One directory per run:
//   config.json     experiment identity and instance list
//   records.jsonl   one SampleRecord per line, canonical order
//   verdicts.jsonl  every verdict with its sample key
//   prompts.jsonl   each distinct prompt once, by content hash
//   cassettes/      chat and Lean recordings made by this run
//   reports/        report.json, report.tsv, report.txt
class RunStore {
 public:
  // Creates the directory or reopens it for resume. A reopened store must
  // carry the same config; trailing partial writes are discarded.
  static std::unique_ptr<RunStore> open_or_create(const std::filesystem::path& runs_dir, const std::string& run_id,
                                 const nlohmann::json& config);
  // Throws IncompleteRun when the directory or its config is missing.
  static std::unique_ptr<RunStore> open_existing(const std::filesystem::path& run_dir);

  const std::filesystem::path& dir() const { return dir_; }
  std::filesystem::path cassette_dir() const { return dir_ / "cassettes"; }
  std::filesystem::path reports_dir() const { return dir_ / "reports"; }
  const nlohmann::json& config() const { return config_; }

  const std::vector<SampleRecord>& records() const { return records_; }
  bool contains(const std::string& key) const { return keys_.contains(key); }
  std::size_t size() const { return records_.size(); }

  // Write-once: a key already present throws RunError. Prompts not yet
  // stored are appended first, then verdicts, then the record.
  void commit(const SampleRecord& record, const std::vector<PromptBundle>& prompts);

  // Every stored prompt, in storage order.
  std::vector<nlohmann::json> prompts() const;

 private:
  explicit RunStore(std::filesystem::path dir) : dir_(std::move(dir)) {}
  void load();

  std::filesystem::path dir_;
  nlohmann::json config_;
  std::vector<SampleRecord> records_;
  std::set<std::string> keys_;
  std::set<std::string> prompt_hashes_;
  std::mutex mu_;
};

// Writes `content` to `path` through a temporary file and a rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

}  // namespace conjbench
