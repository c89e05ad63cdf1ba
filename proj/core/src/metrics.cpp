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

#include "conjbench/metrics.hpp"

#include <fstream>
#include <regex>

#include "conjbench/cassette.hpp"
#include "conjbench/digest.hpp"
#include "conjbench/error.hpp"
#include "conjbench/lean_text.hpp"
#include "conjbench/prompts.hpp"
#include "conjbench/subprocess.hpp"

namespace conjbench {

std::string_view to_string(Metric m) {
  switch (m) {
    case Metric::Typecheck:
      return "typecheck";
    case Metric::EquivRfl:
      return "equiv_rfl";
    case Metric::ConJudge:
      return "conjudge";
    case Metric::Grader:
      return "grader";
    case Metric::BeqPlus:
      return "beq_plus";
  }
  return "?";
}

std::optional<Metric> parse_metric(std::string_view s) {
  for (auto m : {Metric::Typecheck, Metric::EquivRfl, Metric::ConJudge, Metric::Grader, Metric::BeqPlus}) {
    if (to_string(m) == s) return m;
  }
  return std::nullopt;
}

std::string_view to_string(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::Ok:
      return "ok";
    case VerdictStatus::ParseFailure:
      return "parse_failure";
    case VerdictStatus::Skipped:
      return "skipped";
    case VerdictStatus::NotRun:
      return "not_run";
  }
  return "?";
}

std::optional<VerdictStatus> parse_verdict_status(std::string_view s) {
  for (auto v : {VerdictStatus::Ok, VerdictStatus::ParseFailure, VerdictStatus::Skipped,
                 VerdictStatus::NotRun}) {
    if (to_string(v) == s) return v;
  }
  return std::nullopt;
}

std::string SampleKey::str() const {
  return task + "/" + model + "/" + method + "/" + setting + "/" + instance_id + "/" + std::to_string(seed_index);
}

nlohmann::json SampleKey::to_json() const {
  return {{"instance_id", instance_id}, {"task", task},         {"model", model},
          {"method", method},
          {"setting", setting},         {"seed_index", seed_index}, {"seed", seed}};
}

SampleKey SampleKey::from_json(const nlohmann::json& j) {
  return {j.at("instance_id").get<std::string>(), j.at("task").get<std::string>(),
          j.at("model").get<std::string>(),       j.at("method").get<std::string>(),      j.at("setting").get<std::string>(),
          j.at("seed_index").get<int>(),          j.at("seed").get<std::int64_t>()};
}

nlohmann::json Verdict::to_json() const {
  return {{"key", key.to_json()},
          {"metric", to_string(metric)},
          {"value", value},
          {"status", to_string(status)},
          {"evidence", evidence}};
}

Verdict Verdict::from_json(const nlohmann::json& j) {
  Verdict v;
  const auto metric = parse_metric(j.at("metric").get<std::string>());
  const auto status = parse_verdict_status(j.at("status").get<std::string>());
  if (!metric || !status) throw Error("malformed verdict " + j.dump());
  v.metric = *metric;
  v.status = *status;
  v.value = j.at("value").get<bool>();
  v.evidence = j.value("evidence", "");
  v.key = SampleKey::from_json(j.at("key"));
  return v;
}

std::optional<bool> parse_judge_marker(std::string_view reply, std::string_view marker) {
  std::string pattern;
  bool in_space = false;
  for (const char c : marker) {
    if (c == ' ' || c == '\t' || c == '\n') {
      if (!in_space) pattern += R"(\s+)";
      in_space = true;
      continue;
    }
    in_space = false;
    if (std::string_view(R"(\^$.|?*+()[]{})").find(c) != std::string_view::npos) pattern += '\\';
    pattern += c;
  }
  pattern += R"(\s*\*\*\s*([Tt][Rr][Uu][Ee]|[Ff][Aa][Ll][Ss][Ee])\s*\*\*)";
  const std::regex re(pattern);
  std::optional<bool> last;
  const std::string text(reply);
  for (auto it = std::sregex_iterator(text.begin(), text.end(), re); it != std::sregex_iterator(); ++it) {
    const auto v = (*it)[1].str();
    last = v[0] == 'T' || v[0] == 't';
  }
  return last;
}

namespace {

void require_text(std::string_view s, std::string_view what) {
  if (lean::trim(s).empty()) throw PreconditionError(std::string(what) + " is empty");
}

void finish_judgement(JudgeOutcome& out, const Completion& verdict_call, std::string_view marker) {
  const auto parsed = parse_judge_marker(verdict_call.text, marker);
  if (!parsed) {
    out.status = VerdictStatus::ParseFailure;
    out.value = false;
    out.evidence = "unparsed judge reply " + verdict_call.request_digest;
    return;
  }
  out.value = *parsed;
  out.evidence = std::string("judge ") + verdict_call.request_digest + ": " + (out.value ? "True" : "False");
}

}  // namespace

JudgeOutcome judge_conjudge(Gateway& gateway, std::string_view generated,
                            std::string_view gold_conjecture, std::string_view gold_formal_statement,
                            const SamplingSpec& spec) {
  require_text(generated, "generated formalisation");
  const auto prompt = render({TemplateName::ConJudge},
                             {{"conjecture", std::string(gold_conjecture)},
                              {"statement1", std::string(gold_formal_statement)},
                              {"statement2", std::string(generated)}});
  JudgeOutcome out;
  out.calls.push_back(gateway.complete(prompt, spec));
  finish_judgement(out, out.calls.back(), kConJudgeMarker);
  return out;
}

JudgeOutcome score_grader(Gateway& gateway, std::string_view gold_formal,
                          std::string_view generated_formal, const SamplingSpec& math_spec,
                          const SamplingSpec& judge_spec) {
  require_text(gold_formal, "gold formal statement");
  require_text(generated_formal, "generated formal statement");
  JudgeOutcome out;
  std::string translations[2];
  const std::string_view sources[2] = {gold_formal, generated_formal};
  for (int i = 0; i < 2; ++i) {
    const auto prompt = render({TemplateName::GraderBackTranslate},
                               {{"formal_statement", std::string(sources[i])}});
    out.calls.push_back(gateway.complete(prompt, math_spec));
    translations[i] = lean::trim(out.calls.back().text);
  }
  const auto compare = render({TemplateName::GraderCompare},
                              {{"statement1", translations[0]}, {"statement2", translations[1]}});
  out.calls.push_back(gateway.complete(compare, judge_spec));
  finish_judgement(out, out.calls.back(), kGraderMarker);
  return out;
}

std::vector<AnnotatedSample> load_annotations(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw ConfigError("annotation file not found: " + path.string());
  std::vector<AnnotatedSample> out;
  for (const auto& r : read_jsonl(path)) {
    try {
      out.push_back({r.at("id").get<std::string>(), r.value("setting", ""),
                     r.at("generated").get<std::string>(), r.at("gold_conjecture").get<std::string>(),
                     r.at("gold_formal_statement").get<std::string>(), r.at("human").get<bool>()});
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("annotation record " + std::to_string(out.size() + 1) + ": " + e.what());
    }
  }
  return out;
}

std::string CalibrationResult::display() const {
  if (total == 0) return "n/a";
  const std::uint64_t hundredths = (agreed * 200 + total) / (2 * total);
  std::string frac = std::to_string(hundredths % 100);
  if (frac.size() < 2) frac.insert(0, "0");
  return std::to_string(hundredths / 100) + "." + frac;
}

CalibrationResult calibrate_judge(Gateway& gateway, const std::vector<AnnotatedSample>& annotations,
                                  const SamplingSpec& spec) {
  if (annotations.empty()) throw PreconditionError("empty annotation set");
  CalibrationResult result;
  for (const auto& a : annotations) {
    bool label = false;
    if (lean::trim(a.generated).empty()) {
      ++result.parse_failures;
    } else {
      const auto out = judge_conjudge(gateway, a.generated, a.gold_conjecture, a.gold_formal_statement, spec);
      if (out.status == VerdictStatus::ParseFailure) ++result.parse_failures;
      label = out.value;
    }
    result.judge_labels.emplace_back(a.id, label);
    ++result.total;
    if (label == a.human) ++result.agreed;
  }
  return result;
}

namespace {

LeanVerdict from_outcome(LeanJob job, LeanOutcome outcome) {
  if (outcome.status == LeanStatus::ToolFailure) {
    throw ToolFailure("Lean toolchain failure on job " + job.job_id + ": " + outcome.summary());
  }
  LeanVerdict v;
  v.value = outcome.status == LeanStatus::Success;
  v.evidence = outcome.summary();
  v.job = std::move(job);
  v.outcome = std::move(outcome);
  return v;
}

}  // namespace

LeanVerdict score_equiv_rfl(LeanRunner& runner, std::string_view gold_conjecture,
                            std::string_view generated_conjecture, std::string_view header) {
  LeanJob job;
  try {
    job = build_equiv_rfl_job(gold_conjecture, generated_conjecture, header);
  } catch (const PreconditionError& e) {
    return {false, VerdictStatus::Ok, std::string("unbuildable: ") + e.what(), std::nullopt, std::nullopt};
  }
  auto outcome = runner.run(job);
  return from_outcome(std::move(job), std::move(outcome));
}

LeanVerdict score_typecheck(LeanRunner& runner, const ProblemInstance& instance,
                            std::string_view generated, Setting setting) {
  LeanJob job;
  try {
    job = build_typecheck_job(instance, generated, setting);
  } catch (const PreconditionError& e) {
    return {false, VerdictStatus::Ok, std::string("unbuildable: ") + e.what(), std::nullopt, std::nullopt};
  }
  auto outcome = runner.run(job);
  return from_outcome(std::move(job), std::move(outcome));
}

LeanVerdict score_beq_plus(const std::optional<BeqChecker>& checker, std::string_view gold_source,
                           std::string_view generated_source, bool generated_typechecks) {
  if (!checker || checker->command.empty()) {
    return {false, VerdictStatus::NotRun, "no checker configured", std::nullopt, std::nullopt};
  }
  if (!generated_typechecks) {
    return {false, VerdictStatus::Skipped, std::string(kPresupposesTypechecking), std::nullopt,
            std::nullopt};
  }
  const auto pair_id = sha256_hex(std::string(gold_source) + '\0' + std::string(generated_source));
  const auto dir = checker->scratch.empty() ? std::filesystem::temp_directory_path() : checker->scratch;
  std::filesystem::create_directories(dir);
  const auto gold_path = dir / (pair_id + ".gold.lean");
  const auto gen_path = dir / (pair_id + ".generated.lean");
  std::ofstream(gold_path, std::ios::binary) << gold_source;
  std::ofstream(gen_path, std::ios::binary) << generated_source;
  auto argv = checker->command;
  argv.push_back(gold_path.string());
  argv.push_back(gen_path.string());
  const auto r = run_process(argv, dir, checker->timeout);
  std::error_code ec;
  std::filesystem::remove(gold_path, ec);
  std::filesystem::remove(gen_path, ec);
  if (r.spawn_failed || r.timed_out || r.exit_code != 0) {
    throw ToolFailure("equivalence checker failed (exit " + std::to_string(r.exit_code) +
                      (r.timed_out ? ", timed out" : "") + "): " + lean::trim(r.output));
  }
  const auto reply = lean::trim(r.output);
  if (reply != "true" && reply != "false") {
    throw ToolFailure("equivalence checker printed `" + reply + "`, expected true or false");
  }
  return {reply == "true", VerdictStatus::Ok, "checker: " + reply, std::nullopt, std::nullopt};
}

}  // namespace conjbench
