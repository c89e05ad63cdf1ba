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
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "conjbench/dataset.hpp"
#include "conjbench/metrics.hpp"

namespace conjbench {

enum class PassMode {
  FirstK,     // at least one true among the first k samples in seed order
  Estimator,  // unbiased 1 - C(n-c, k) / C(n, k) over all n samples
};

std::string_view to_string(PassMode m);
std::optional<PassMode> parse_pass_mode(std::string_view s);

// Samples of one instance for one metric, in canonical seed order.
struct InstanceVerdicts {
  std::string instance_id;
  SolutionType solution_type = SolutionType::Numerical;
  std::vector<bool> values;
  std::size_t parse_failures = 0;
  std::size_t skipped = 0;
  std::size_t not_run = 0;
};

struct Grouping {
  std::string method;
  std::string setting;
  std::optional<SolutionType> solution_type;

  bool operator==(const Grouping&) const = default;
};

struct PassAtK {
  Metric metric = Metric::Typecheck;
  int k = 1;
  PassMode mode = PassMode::FirstK;
  std::size_t numerator = 0;    // instances passing under FirstK
  std::size_t denominator = 0;  // instances in the grouping
  double rate = 0.0;            // in [0, 1], full precision
  Grouping grouping;
  std::size_t parse_failures = 0;
  std::size_t skipped = 0;
  bool not_run = false;  // every verdict in the grouping was NotRun

  // Percentage with two decimals, rounded half-up: "3.28". "not run" when
  // the metric never ran.
  std::string display() const;
  // Percentage in hundredths, rounded half-up.
  std::int64_t hundredths() const;

  nlohmann::json to_json() const;
};

// Rounds 100 * num / den to hundredths, half-up, in exact integer arithmetic.
std::int64_t percent_hundredths(std::uint64_t num, std::uint64_t den);
std::int64_t percent_hundredths(double rate);
// "3.28", "-52.07", "100.00".
std::string format_hundredths(std::int64_t h, bool explicit_plus = false);

// Throws PreconditionError when an instance has fewer than k samples or k < 1.
PassAtK aggregate_pass_at_k(std::span<const InstanceVerdicts> instances, Metric metric, int k,
                            Grouping grouping, PassMode mode = PassMode::FirstK);

}  // namespace conjbench
