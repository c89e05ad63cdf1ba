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


// Prints one line per acceptance criterion and exits nonzero if any fails.
//   conjbench_acceptance [--only N]

#include <chrono>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "conjbench/cassette.hpp"
#include "conjbench/lean_text.hpp"
#include "conjbench/metrics.hpp"
#include "conjbench/pass_at_k.hpp"
#include "conjbench/run_store.hpp"
#include "conjbench/runner.hpp"
#include "test_support.hpp"

namespace fs = std::filesystem;
using namespace conjbench;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Call {
  int code;
  std::string out;
  std::string err;
};

Call cli_call(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path fixtures() { return testing::fixtures_dir(); }

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> out;
  if (!fs::exists(dir)) return out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) out[fs::relative(e.path(), dir).string()] = testing::slurp(e.path());
  }
  return out;
}

fs::path dataset_path() {
  if (const char* env = std::getenv("CONJECTUREBENCH_PATH"); env && *env) return env;
  return fs::path(CONJBENCH_DATA_DIR) / "conjecturebench.jsonl";
}

Outcome dataset_gate() {
  const auto path = dataset_path();
  if (!fs::exists(path)) return {false, "dataset not found at " + path.string()};
  const auto r = cli_call({"validate", path.string(), "--json"});
  if (r.code != 0) return {false, "validate exited " + std::to_string(r.code) + ": " + r.err};
  const auto j = nlohmann::json::parse(r.out);
  const auto& t = j.at("type_counts");
  std::ostringstream d;
  d << j.at("problem_count") << " instances, " << t.at("Numerical") << "/" << t.at("Algebraic") << "/"
    << t.at("Proof");
  const bool ok = j.at("problem_count") == 457 && t.at("Numerical") == 178 && t.at("Algebraic") == 165 &&
                  t.at("Proof") == 114;
  return {ok, d.str() + " (expected 457, 178/165/114)"};
}

Outcome prompt_fidelity() {
  const auto dir = fixtures() / "prompts";
  const auto cases = nlohmann::json::parse(testing::slurp(dir / "cases.json"));
  std::size_t matched = 0;
  std::vector<std::string> mismatched;
  for (const auto& c : cases) {
    std::vector<std::string> args = {"render"};
    for (auto a : c.at("args")) {
      auto s = a.get<std::string>();
      for (std::size_t p; (p = s.find("{dir}")) != std::string::npos;) s.replace(p, 5, dir.string());
      args.push_back(s);
    }
    const auto name = c.at("name").get<std::string>();
    const auto r = cli_call(args);
    if (r.code == 0 && r.out == testing::slurp(dir / "golden" / (name + ".txt"))) {
      ++matched;
    } else {
      mismatched.push_back(name);
    }
  }
  std::string detail = std::to_string(matched) + "/" + std::to_string(cases.size()) + " prompts byte-identical";
  for (const auto& m : mismatched) detail += "; differs: " + m;
  return {mismatched.empty() && cases.size() >= 14, detail};
}

Outcome pass_at_k_arithmetic() {
  std::vector<InstanceVerdicts> table;
  for (int i = 0; i < 457; ++i) {
    InstanceVerdicts v;
    v.instance_id = "i" + std::to_string(i);
    v.values = {i < 15};
    table.push_back(v);
  }
  const auto headline = aggregate_pass_at_k(table, Metric::Typecheck, 1, {}).display();
  std::mt19937 rng(457);
  std::size_t monotone_failures = 0, partition_failures = 0;
  for (int t = 0; t < 1000; ++t) {
    const int n = std::uniform_int_distribution<int>(1, 10)(rng);
    const int m = std::uniform_int_distribution<int>(1, 60)(rng);
    std::vector<InstanceVerdicts> insts;
    for (int i = 0; i < m; ++i) {
      InstanceVerdicts v;
      v.instance_id = std::to_string(i);
      v.solution_type = static_cast<SolutionType>(std::uniform_int_distribution<int>(0, 2)(rng));
      for (int s = 0; s < n; ++s) v.values.push_back(std::bernoulli_distribution(0.2)(rng));
      insts.push_back(v);
    }
    std::size_t prev = 0;
    for (int k = 1; k <= n; ++k) {
      const auto all = aggregate_pass_at_k(insts, Metric::Typecheck, k, {});
      if (all.numerator < prev) ++monotone_failures;
      prev = all.numerator;
      std::size_t sum = 0;
      for (auto type : {SolutionType::Numerical, SolutionType::Algebraic, SolutionType::Proof}) {
        sum += aggregate_pass_at_k(insts, Metric::Typecheck, k, {"", "", type}).numerator;
      }
      if (sum != all.numerator) ++partition_failures;
    }
  }
  const bool ok = headline == "3.28" && monotone_failures == 0 && partition_failures == 0;
  return {ok, "15/457 -> " + headline + ", monotonicity violations " + std::to_string(monotone_failures) +
                  "/1000 matrices, partition violations " + std::to_string(partition_failures)};
}

Outcome judge_parsing() {
  const auto records = read_jsonl(fixtures() / "judge/transcripts.jsonl");
  std::size_t correct = 0;
  bool conjudge = false, grader = false, absent = false, multi = false;
  for (const auto& r : records) {
    const bool is_conjudge = r.at("marker") == "conjudge";
    const auto marker = is_conjudge ? kConJudgeMarker : kGraderMarker;
    (is_conjudge ? conjudge : grader) = true;
    const auto reply = r.at("reply").get<std::string>();
    const auto got = parse_judge_marker(reply, marker);
    if (r.at("expected").is_null()) {
      absent = true;
      correct += !got.has_value();
    } else {
      correct += got.has_value() && *got == r.at("expected").get<bool>();
    }
    const std::string tail(marker.substr(marker.rfind(' ') + 1));
    std::size_t occurrences = 0;
    for (auto p = reply.find(tail); p != std::string::npos; p = reply.find(tail, p + 1)) ++occurrences;
    multi = multi || occurrences > 1;
  }
  const bool coverage = records.size() >= 20 && conjudge && grader && absent && multi;
  return {coverage && correct == records.size(),
          std::to_string(correct) + "/" + std::to_string(records.size()) + " transcripts parsed correctly" +
              (coverage ? "" : " (fixture lacks required coverage)")};
}

ExperimentConfig replay_config(const fs::path& runs, std::vector<std::string> extra = {}) {
  extra.push_back("runs_dir=" + runs.string());
  return load_config(fixtures() / "replay/config.json", extra);
}

fs::path shared_run_dir;
std::optional<testing::TempDir> scratch;

Outcome replay_end_to_end() {
  if (!scratch) scratch.emplace();
  const auto a = Experiment(replay_config(scratch->path() / "a")).run();
  const auto b = Experiment(replay_config(scratch->path() / "b", {"workers=1"})).run();
  const auto c1 = Experiment(replay_config(scratch->path() / "c")).run({23});
  const auto c2 = Experiment(replay_config(scratch->path() / "c")).run();
  shared_run_dir = a.dir;
  const auto sa = snapshot(a.dir), sb = snapshot(b.dir), sc = snapshot(c2.dir);
  const bool shape = a.total == 80 && a.complete && b.complete && !c1.complete && c2.complete && c2.existing == 23;
  const bool identical = sa == sb && sa == sc && sa.count("reports/report.txt") && sa.count("records.jsonl");
  return {shape && identical && a.live_calls == 0 && c2.live_calls == 0,
          "run " + a.run_id + ": " + std::to_string(sa.size()) + " store files, " + std::to_string(a.total) +
              " samples; second run " + (sa == sb ? "identical" : "DIFFERS") + "; interrupted after 23 and resumed " +
              (sa == sc ? "identical" : "DIFFERS")};
}

Outcome leak_freedom() {
  if (shared_run_dir.empty()) {
    const auto r = replay_end_to_end();
    if (shared_run_dir.empty()) return {false, "replay run failed: " + r.detail};
  }
  const auto store = RunStore::open_existing(shared_run_dir);
  std::map<std::string, ProblemInstance> by_id;
  for (const auto& inst : load_dataset(fixtures() / "dataset/sample.jsonl").instances) by_id[inst.id] = inst;
  std::map<std::string, std::set<std::string>> owners;
  for (const auto& r : store->records()) {
    if (r.key.setting != "unseen") continue;
    for (const auto& [_, h] : r.prompt_hashes) owners[h].insert(r.key.instance_id);
  }
  std::size_t scanned = 0, hits = 0;
  for (const auto& p : store->prompts()) {
    const auto it = owners.find(p.at("content_hash").get<std::string>());
    if (it == owners.end()) continue;
    ++scanned;
    for (const auto& id : it->second) {
      const auto& inst = by_id.at(id);
      hits += count_unmasked_occurrences(p, gold_term(inst));
      hits += count_unmasked_occurrences(p, lean::normalize_whitespace(inst.gold_conjecture));
    }
  }
  return {scanned > 0 && hits == 0,
          std::to_string(scanned) + " unseen prompts scanned, " + std::to_string(hits) + " gold term occurrences"};
}

Outcome calibration() {
  const auto r = cli_call({"calibrate", "-c", (fixtures() / "calibration/config.json").string(), "--annotations",
                           (fixtures() / "calibration/annotations.jsonl").string()});
  const auto pos = r.out.find("agreement: ");
  const auto shown = pos == std::string::npos ? std::string("none") : r.out.substr(pos, r.out.find('\n', pos) - pos);
  return {r.code == 0 && r.out.find("agreement: 0.83 ") != std::string::npos,
          r.code == 0 ? shown : "calibrate exited " + std::to_string(r.code) + ": " + r.err};
}

struct Criterion {
  int number;
  std::string title;
  std::chrono::milliseconds budget;
  std::function<Outcome()> check;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance checks"};
  int only = 0;
  app.add_option("--only", only, "Run a single criterion");
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria = {
      {1, "dataset gate", std::chrono::milliseconds(1000), dataset_gate},
      {2, "prompt fidelity", std::chrono::milliseconds(1000), prompt_fidelity},
      {3, "pass@k arithmetic", std::chrono::milliseconds(5000), pass_at_k_arithmetic},
      {4, "judge parsing", std::chrono::milliseconds(1000), judge_parsing},
      {5, "replay end-to-end", std::chrono::milliseconds(30000), replay_end_to_end},
      {6, "leak freedom", std::chrono::milliseconds(5000), leak_freedom},
      {10, "calibration", std::chrono::milliseconds(5000), calibration},
  };
  bool all = true;
  bool ran = false;
  for (const auto& c : criteria) {
    if (only && c.number != only) continue;
    ran = true;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
    if (ms > c.budget) {
      o.pass = false;
      o.detail += "; over time budget";
    }
    all = all && o.pass;
    std::cout << "criterion " << c.number << " (" << c.title << "): " << (o.pass ? "PASS" : "FAIL") << " ["
              << ms.count() << " ms] " << o.detail << std::endl;
  }
  if (!ran) {
    std::cerr << "no criterion numbered " << only << "\n";
    return 2;
  }
  return all ? 0 : 1;
}
