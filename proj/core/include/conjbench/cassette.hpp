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
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

namespace conjbench {

// Append-only store of JSON records keyed by one string field. Any number
// of files can be loaded for reading; new records go to a single writable
// file. Reads may run concurrently; appends are serialised.
class KeyedLog {
 public:
  explicit KeyedLog(std::string key_field);

  // Loads every line of `path`. A missing file is treated as empty. Later
  // records with an already-known key are ignored (first write wins).
  void load(const std::filesystem::path& path);

  // Subsequent appends go to `path` (created on first append).
  void set_writer(std::filesystem::path path);
  bool writable() const;

  std::optional<nlohmann::json> find(const std::string& key) const;

  // Appends unless the key is already present. Returns false for
  // duplicates. Throws Error if no writer is configured.
  bool append(const nlohmann::json& record);

  std::size_t size() const;

 private:
  std::string key_field_;
  mutable std::shared_mutex mu_;
  std::unordered_map<std::string, nlohmann::json> index_;
  std::optional<std::filesystem::path> writer_;
};

// Recorded chat exchanges keyed by request digest.
class Cassette : public KeyedLog {
 public:
  Cassette() : KeyedLog("request_digest") {}
};

// Recorded Lean outcomes keyed by job id.
class OutcomeCassette : public KeyedLog {
 public:
  OutcomeCassette() : KeyedLog("job_id") {}
};

// Reads a line-delimited JSON file; blank lines skipped.
std::vector<nlohmann::json> read_jsonl(const std::filesystem::path& path);
// Appends one compact JSON line and flushes.
void append_jsonl(const std::filesystem::path& path, const nlohmann::json& record);

}  // namespace conjbench
