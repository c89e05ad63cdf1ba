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

#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace conjbench {

enum class Source { PutnamBench, CombiBench };
enum class SolutionType { Numerical, Algebraic, Proof };
enum class Setting { Seen, Unseen };

std::string_view to_string(Source s);
std::string_view to_string(SolutionType t);
std::string_view to_string(Setting s);
std::optional<Source> parse_source(std::string_view s);
std::optional<SolutionType> parse_solution_type(std::string_view s);
// Accepts "Seen"/"seen"/"Unseen"/"unseen".
std::optional<Setting> parse_setting(std::string_view s);

inline constexpr std::string_view kDefaultEnvironmentHeader = "import Mathlib";

// One informal/formal pair. The gold conjecture is stored apart from the
// gold formal statement, which refers to it by the identifier `conjecture`.
struct ProblemInstance {
  std::string id;
  Source source = Source::PutnamBench;
  std::string informal_statement;
  std::string gold_conjecture;
  std::string gold_formal_statement;
  SolutionType solution_type = SolutionType::Numerical;
  std::string environment_header{kDefaultEnvironmentHeader};

  bool operator==(const ProblemInstance&) const = default;
};

// Throws DatasetError naming the first violated record invariant.
void validate_instance(const ProblemInstance& instance);

nlohmann::json to_json(const ProblemInstance& instance);
// Parses and validates one record. Throws DatasetError.
ProblemInstance instance_from_json(const nlohmann::json& record);

struct DatasetManifest {
  std::string name;
  std::size_t problem_count = 0;
  std::map<SolutionType, std::size_t> type_counts;
  std::string schema_version;

  std::size_t count(SolutionType t) const;
};

inline constexpr std::string_view kSchemaVersion = "1";

struct Dataset {
  std::vector<ProblemInstance> instances;
  DatasetManifest manifest;

  const ProblemInstance* find(std::string_view id) const;
};

DatasetManifest compute_manifest(std::string name, const std::vector<ProblemInstance>& instances);

// Reads one JSON record per line; blank lines are skipped. Instances keep
// file order. Throws DatasetError with the 1-based line number on malformed
// records, duplicate ids, or invariant violations.
Dataset load_dataset(const std::filesystem::path& path);
Dataset parse_dataset(std::string_view text, std::string name);

// Writes instances in the same line-delimited format `load_dataset` reads.
void save_dataset(const std::vector<ProblemInstance>& instances, const std::filesystem::path& path);
std::string serialize_dataset(const std::vector<ProblemInstance>& instances);

// Each criterion that is set must match. An empty id set selects nothing.
struct InstanceFilter {
  std::optional<SolutionType> solution_type;
  std::optional<Source> source;
  std::optional<std::set<std::string>> ids;

  bool matches(const ProblemInstance& instance) const;
};

std::vector<ProblemInstance> filter_instances(const std::vector<ProblemInstance>& instances,
                                              const InstanceFilter& filter);

// What a model is allowed to see for one autoformalisation request.
struct TaskInput {
  std::string informal_statement;
  std::optional<std::string> conjecture_block;
  std::string environment_header;
};

TaskInput strip_conjecture_for_setting(const ProblemInstance& instance, Setting setting);

}  // namespace conjbench
