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

#include "conjbench/pass_at_k.hpp"

#include <cmath>

#include "conjbench/error.hpp"

namespace conjbench {

std::string_view to_string(PassMode m) { return m == PassMode::FirstK ? "first_k" : "estimator"; }

std::optional<PassMode> parse_pass_mode(std::string_view s) {
  if (s == "first_k") return PassMode::FirstK;
  if (s == "estimator") return PassMode::Estimator;
  return std::nullopt;
}

std::int64_t percent_hundredths(std::uint64_t num, std::uint64_t den) {
  if (den == 0) return 0;
  return static_cast<std::int64_t>((num * 20000 + den) / (2 * den));
}

std::int64_t percent_hundredths(double rate) {
  return static_cast<std::int64_t>(std::floor(rate * 10000.0 + 0.5 + 1e-9));
}

std::string format_hundredths(std::int64_t h, bool explicit_plus) {
  std::string sign;
  if (h < 0) {
    sign = "-";
    h = -h;
  } else if (explicit_plus) {
    sign = "+";
  }
  std::string frac = std::to_string(h % 100);
  if (frac.size() < 2) frac.insert(0, "0");
  return sign + std::to_string(h / 100) + "." + frac;
}

std::int64_t PassAtK::hundredths() const {
  if (mode == PassMode::FirstK) return percent_hundredths(numerator, denominator);
  return percent_hundredths(rate);
}

std::string PassAtK::display() const {
  if (not_run) return "not run";
  if (denominator == 0) return "n/a";
  return format_hundredths(hundredths());
}

nlohmann::json PassAtK::to_json() const {
  nlohmann::json j = {{"metric", to_string(metric)},
                      {"k", k},
                      {"mode", to_string(mode)},
                      {"numerator", numerator},
                      {"denominator", denominator},
                      {"rate", rate},
                      {"display", display()},
                      {"method", grouping.method},
                      {"setting", grouping.setting},
                      {"parse_failures", parse_failures},
                      {"skipped", skipped},
                      {"not_run", not_run}};
  j["solution_type"] = grouping.solution_type ? nlohmann::json(to_string(*grouping.solution_type))
                                              : nlohmann::json("All");
  return j;
}

namespace {

// 1 - C(n-c, k) / C(n, k), as a running product to stay in range.
double estimator(std::size_t n, std::size_t c, std::size_t k) {
  if (n - c < k) return 1.0;
  double miss = 1.0;
  for (std::size_t i = n - c + 1; i <= n; ++i) miss *= 1.0 - static_cast<double>(k) / i;
  return 1.0 - miss;
}

}  // namespace

PassAtK aggregate_pass_at_k(std::span<const InstanceVerdicts> instances, Metric metric, int k,
                            Grouping grouping, PassMode mode) {
  if (k < 1) throw PreconditionError("k must be at least 1");
  PassAtK out;
  out.metric = metric;
  out.k = k;
  out.mode = mode;
  out.grouping = std::move(grouping);
  out.not_run = !instances.empty();
  double estimate_sum = 0.0;
  for (const auto& inst : instances) {
    if (out.grouping.solution_type && inst.solution_type != *out.grouping.solution_type) continue;
    if (inst.values.size() < static_cast<std::size_t>(k)) {
      throw PreconditionError("instance " + inst.instance_id + " has " +
                              std::to_string(inst.values.size()) + " samples, k = " + std::to_string(k));
    }
    ++out.denominator;
    out.parse_failures += inst.parse_failures;
    out.skipped += inst.skipped;
    if (inst.not_run < inst.values.size()) out.not_run = false;
    const bool pass = std::any_of(inst.values.begin(), inst.values.begin() + k, [](bool b) { return b; });
    if (pass) ++out.numerator;
    if (mode == PassMode::Estimator) {
      const auto c = static_cast<std::size_t>(std::count(inst.values.begin(), inst.values.end(), true));
      estimate_sum += estimator(inst.values.size(), c, static_cast<std::size_t>(k));
    }
  }
  if (out.denominator == 0) out.not_run = false;
  if (out.denominator > 0) {
    out.rate = mode == PassMode::FirstK ? static_cast<double>(out.numerator) / out.denominator
                                        : estimate_sum / out.denominator;
  }
  return out;
}

}  // namespace conjbench
