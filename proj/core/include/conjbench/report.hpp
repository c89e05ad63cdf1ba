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

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "conjbench/pass_at_k.hpp"
#include "conjbench/run_store.hpp"

namespace conjbench {

struct ReportRow {
  std::string model;
  std::string method;
  std::string setting;
  std::optional<SolutionType> solution_type;  // nullopt is the "All" row
  std::map<Metric, std::map<int, PassAtK>> values;
  // Unseen rows: unseen minus seen, in hundredths, for the same model,
  // method and type.
  std::map<Metric, std::map<int, std::int64_t>> delta;
};

struct CellTally {
  std::string model;
  std::string method;
  std::string setting;
  std::size_t samples = 0;
  std::size_t stage_failures = 0;
  std::map<Metric, std::size_t> parse_failures;
  std::map<Metric, std::size_t> skipped;
};

struct RunReport {
  std::string run_id;
  nlohmann::json identity;
  std::size_t instance_count = 0;
  std::vector<int> ks;
  std::vector<Metric> metrics;
  std::vector<ReportRow> rows;
  std::vector<CellTally> tallies;

  nlohmann::json to_json() const;
  std::string render_tsv() const;
  // Rows are method x setting; unseen values carry the signed difference
  // to seen in brackets.
  std::string render_text() const;
};

// Pure function of the store. Throws IncompleteRun unless every cell holds
// k samples for every instance.
RunReport build_report(const RunStore& store);

// Writes report.json, report.tsv and report.txt under the store's reports/.
void write_report(const RunStore& store, const RunReport& report);

}  // namespace conjbench
