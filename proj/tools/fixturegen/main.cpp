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


// Regenerates the replay and calibration fixtures under tests/fixtures from
// scripted model and Lean backends. Output is deterministic.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <regex>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "conjbench/cassette.hpp"
#include "conjbench/clock.hpp"
#include "conjbench/config.hpp"
#include "conjbench/dataset.hpp"
#include "conjbench/error.hpp"
#include "conjbench/gateway.hpp"
#include "conjbench/lean_bridge.hpp"
#include "conjbench/lean_text.hpp"
#include "conjbench/metrics.hpp"
#include "conjbench/prompts.hpp"
#include "conjbench/run_store.hpp"
#include "conjbench/runner.hpp"

namespace fs = std::filesystem;
using namespace conjbench;
using nlohmann::json;

namespace {

std::uint64_t fnv(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

class FakeClock final : public Clock {
 public:
  time_point now() override {
    t_ += std::chrono::seconds(1);
    return t_;
  }
  void sleep_for(duration d) override { t_ += std::chrono::duration_cast<std::chrono::seconds>(d); }

 private:
  time_point t_ = std::chrono::system_clock::time_point(std::chrono::seconds(1767225600));
};

std::string region_value(const PromptBundle& p, std::string_view name) {
  for (const auto& r : p.regions) {
    if (r.name == name) return p.user_message.substr(r.begin, r.end - r.begin);
  }
  throw PreconditionError("prompt has no region " + std::string(name));
}

const std::map<std::string, std::string>& wrong_terms() {
  static const std::map<std::string, std::string> m = {
      {"quad_roots", "{0, -4}"},
      {"sum_reciprocal_squares", "Real.pi ^ 2 / 8"},
      {"binomial_row_sum", "fun n ↦ 2 ^ n - 1"},
      {"odd_sum", "fun n ↦ n * (n + 1)"},
      {"sqrt_two_irrational", "False"},
      {"max_product_sum_ten", "50"},
      {"combi_handshakes_part_a", "56"},
      {"combi_handshakes_part_b", "fun n ↦ n * (n + 1) / 2"},
      {"combi_derangements_four", "11"},
      {"primes_three_mod_four", "True"},
      {"combi_difference_set", "False"},
      {"geometric_series_half", "2"},
  };
  return m;
}

std::string conj_type(const ProblemInstance& inst) {
  return lean::normalize_whitespace(lean::type_ascription(inst.gold_conjecture).value_or("Prop"));
}

std::string with_term(const ProblemInstance& inst, const std::string& term) {
  return "abbrev conjecture : " + conj_type(inst) + " := " + term;
}

std::string break_syntax(std::string formal) {
  const auto at = formal.rfind(":= sorry");
  if (at != std::string::npos) formal.replace(at, 8, "sorry");
  return formal;
}

std::string drift(const ProblemInstance& inst) {
  return lean::rename_identifier(inst.gold_formal_statement, "conjecture",
                                 "(" + wrong_terms().at(inst.id) + ")");
}

// What a statement claims about its problem: the theorem name and the
// answer it commits to.
struct Reading {
  std::string theorem;
  std::string answer;
};

Reading read_statement(std::string_view src) {
  Reading r;
  std::optional<std::string> decl_term;
  const auto decls = lean::top_level_declarations(src);
  for (std::size_t i = 0; i < decls.size(); ++i) {
    const auto end = i + 1 < decls.size() ? decls[i + 1].begin : src.size();
    const auto text = src.substr(decls[i].begin, end - decls[i].begin);
    if (decls[i].name == "conjecture") {
      if (auto b = lean::declaration_body(text)) decl_term = lean::normalize_whitespace(*b);
    } else if (decls[i].keyword == "theorem") {
      r.theorem = decls[i].name;
      if (!lean::contains_identifier(text, "conjecture")) r.answer = "a different value";
    }
  }
  if (r.answer.empty()) r.answer = decl_term ? *decl_term : "an unspecified value";
  return r;
}

class ScriptedModel final : public ChatProvider {
 public:
  explicit ScriptedModel(std::vector<ProblemInstance> instances) : instances_(std::move(instances)) {}

  std::string complete(const PromptBundle& p, const SamplingSpec& spec) override {
    switch (p.template_id.name) {
      case TemplateName::CotGen:
        return cot(by_statement(region_value(p, "query.informal_statement")), spec);
      case TemplateName::LotGen:
        return lot(by_statement(region_value(p, "query.informal_statement")), region_value(p, "query.cot"));
      case TemplateName::Autoformalise:
        return autoformalise(p, spec);
      case TemplateName::ConJudge:
        return conjudge(p);
      case TemplateName::GraderBackTranslate:
        return back_translate(region_value(p, "formal_statement"));
      case TemplateName::GraderCompare:
        return compare(region_value(p, "statement1"), region_value(p, "statement2"));
      case TemplateName::StandaloneConjecture:
        break;
    }
    throw PreconditionError("no script for " + p.template_id.describe());
  }

 private:
  const ProblemInstance& by_statement(const std::string& s) const {
    for (const auto& i : instances_) {
      if (lean::trim(i.informal_statement) == lean::trim(s)) return i;
    }
    throw PreconditionError("unknown informal statement");
  }
  const ProblemInstance& by_id(const std::string& id) const {
    for (const auto& i : instances_) {
      if (i.id == id) return i;
    }
    throw PreconditionError("unknown instance " + id);
  }

  std::string cot(const ProblemInstance& inst, const SamplingSpec& spec) const {
    if (inst.id == "combi_derangements_four" && spec.seed == 891) {
      return "I am unable to produce hints for this statement.";
    }
    std::string out;
    switch (inst.solution_type) {
      case SolutionType::Numerical:
        out = "- Let the unknown be the value the question asks for, living in " + conj_type(inst) + ".\n"
              "- Translate every condition of the statement into an equation or membership condition.\n"
              "- State that the unknown is exactly the value satisfying these conditions.\n";
        break;
      case SolutionType::Algebraic:
        out = "- Fix n : ℕ and view the requested quantity as a function of n.\n"
              "- Express the sum or count with a finite sum over Finset.range.\n"
              "- State that this expression agrees with a closed form in n for every n.\n";
        break;
      case SolutionType::Proof:
        out = "- Name the property in the statement as a proposition.\n"
              "- Express the property with the corresponding Mathlib predicate.\n"
              "- State that the property holds exactly when the conjectured proposition does.\n";
        break;
    }
    if (spec.seed % 2 == 0) out += "- Keep every quantity in the number system fixed above.\n";
    return out;
  }

  std::string lot(const ProblemInstance& inst, const std::string& cot_text) const {
    const auto steps = parse_cot_steps(cot_text);
    const std::vector<std::string> snippets = {
        "-- the unknown answer\nabbrev conjecture : " + conj_type(inst) + " := sorry",
        "-- the defining condition, as a Prop",
        "theorem " + inst.id + " : _ := sorry",
        "-- no extra code",
    };
    std::string out;
    for (std::size_t i = 0; i < steps.size() && i < snippets.size(); ++i) {
      out += "Lean: " + snippets[i] + "\n";
    }
    return out;
  }

  std::string autoformalise(const PromptBundle& p, const SamplingSpec& spec) const {
    const auto& inst = by_id(lean::trim(region_value(p, "query.name")));
    const bool seen = p.template_id.seen;
    const bool fire = p.template_id.hints;
    const auto roll = fnv(inst.id + (seen ? "|seen" : "|unseen") + (fire ? "|fire" : "|base") + "|" +
                          std::to_string(spec.seed)) % 10;
    const auto& gold = inst.gold_formal_statement;
    std::string code;
    if (seen) {
      const int faithful = fire ? 7 : 5;
      const int broken = fire ? 8 : 7;
      if (roll < static_cast<std::uint64_t>(faithful)) code = gold;
      else if (roll < static_cast<std::uint64_t>(broken)) code = break_syntax(gold);
      else code = drift(inst);
    } else {
      const auto correct = inst.gold_conjecture;
      const auto wrong = with_term(inst, wrong_terms().at(inst.id));
      const std::vector<std::string> base = {correct + "\n\n" + gold, correct + "\n\n" + gold,
                                             wrong + "\n\n" + gold,   wrong + "\n\n" + gold,
                                             wrong + "\n\n" + gold,   wrong + "\n\n" + gold,
                                             gold,                    gold,
                                             correct + "\n\n" + break_syntax(gold),
                                             wrong + "\n\n" + break_syntax(gold)};
      const std::vector<std::string> lf = {correct + "\n\n" + gold, correct + "\n\n" + gold,
                                           correct + "\n\n" + gold, correct + "\n\n" + gold,
                                           wrong + "\n\n" + gold,   wrong + "\n\n" + gold,
                                           wrong + "\n\n" + gold,   gold,
                                           correct + "\n\n" + break_syntax(gold),
                                           correct + "\n\n" + gold};
      code = (fire ? lf : base)[roll];
    }
    return "Here is the formalisation.\n\n```lean\n" + code + "\n```\n";
  }

  std::string conjudge(const PromptBundle& p) const {
    const auto generated = region_value(p, "statement2");
    const auto reading = read_statement(generated);
    const auto& inst = by_id(reading.theorem);
    const auto h = fnv(generated);
    if (h % 29 == 0) return "The generated statement restates the problem but I cannot decide.";
    bool ok = reading.answer == gold_term(inst) ||
              (lean::contains_identifier(generated, "conjecture") &&
               lean::top_level_declarations(generated).size() == 1);
    if (h % 13 == 0) ok = !ok;
    return std::string("The formal statement ") + (ok ? "uses" : "does not use") +
           " the conjectured answer in its conclusion.\n" + std::string(kConJudgeMarker) + " **" +
           (ok ? "True" : "False") + "**\n";
  }

  static std::string back_translate(const std::string& formal) {
    const auto r = read_statement(formal);
    return "The statement of problem " + r.theorem + " with answer " + r.answer + ".";
  }

  static std::string compare(const std::string& a, const std::string& b) {
    const bool same = lean::trim(a) == lean::trim(b);
    return std::string(same ? "Both statements give the same answer to the same problem."
                            : "The statements commit to different answers.") +
           "\n" + std::string(kGraderMarker) + " **" + (same ? "True" : "False") + "**\n";
  }

  std::vector<ProblemInstance> instances_;
};

class ScriptedLean final : public LeanRunner {
 public:
  LeanOutcome run(const LeanJob& job) override {
    LeanOutcome out;
    out.wall_time = std::chrono::milliseconds(700 + fnv(job.job_id) % 500);
    const auto decls = lean::top_level_declarations(job.source);
    bool declares = false;
    for (const auto& d : decls) declares |= d.name == "conjecture";
    for (std::size_t i = 0; i < decls.size(); ++i) {
      if (decls[i].keyword != "theorem") continue;
      const auto end = i + 1 < decls.size() ? decls[i + 1].begin : job.source.size();
      const auto text = std::string_view(job.source).substr(decls[i].begin, end - decls[i].begin);
      const auto line = 1 + std::count(job.source.begin(), job.source.begin() + decls[i].begin, '\n');
      if (text.find(":=") == std::string_view::npos) {
        out.status = LeanStatus::CompileError;
        out.messages.push_back({"error", "unexpected token 'sorry'; expected ':=', 'where' or '|'",
                                static_cast<int>(line), 0});
        return out;
      }
      if (!declares && lean::contains_identifier(text, "conjecture")) {
        out.status = LeanStatus::CompileError;
        out.messages.push_back({"error", "unknown identifier 'conjecture'", static_cast<int>(line), 0});
        return out;
      }
    }
    out.status = LeanStatus::Success;
    out.messages.push_back({"warning", "declaration uses 'sorry'", 1, 0});
    return out;
  }
};

void write_json(const fs::path& p, const json& j) { write_file_atomic(p, j.dump(2) + "\n"); }

json replay_config_doc(const std::vector<std::string>& ids) {
  return {{"name", "replay-sample"},
          {"task", "autoformalise"},
          {"methods", {"baseline", "leanfire"}},
          {"settings", {"seen", "unseen"}},
          {"models", {"gpt-4.1"}},
          {"k", 2},
          {"dataset", "../dataset/sample.jsonl"},
          {"instances", ids},
          {"judge_model", "qwen3-14b"},
          {"gateway", {{"mode", "replay"}, {"cassettes", {"chat.jsonl"}}}},
          {"lean", {{"mode", "replay"}, {"outcomes", {"lean.jsonl"}}}},
          {"workers", 4}};
}

void generate_replay(const fs::path& fixtures, const std::vector<ProblemInstance>& all) {
  const auto dir = fixtures / "replay";
  fs::create_directories(dir);
  std::vector<std::string> ids;
  for (const auto& i : all) {
    if (i.id != "combi_difference_set" && i.id != "geometric_series_half") ids.push_back(i.id);
  }
  const auto doc = replay_config_doc(ids);
  write_json(dir / "config.json", doc);

  auto rec = doc;
  rec["gateway"] = {{"mode", "record"}};
  rec["lean"] = {{"mode", "record"}, {"workspace", "unused"}, {"workers", 1}};
  rec["workers"] = 1;
  const auto tmp = fs::temp_directory_path() / "conjbench-fixturegen";
  fs::remove_all(tmp);
  rec["runs_dir"] = tmp.string();
  auto config = config_from_json(rec, dir);

  FakeClock clock;
  auto model = std::make_shared<ScriptedModel>(all);
  RunnerHooks hooks;
  hooks.providers = [model](const std::string&) -> std::shared_ptr<ChatProvider> { return model; };
  hooks.lean_live = std::make_shared<ScriptedLean>();
  hooks.clock = &clock;
  Experiment exp(config, hooks);
  const auto summary = exp.run();
  if (!summary.complete) throw RunError("fixture run incomplete");
  fs::copy_file(summary.dir / "cassettes" / "chat.jsonl", dir / "chat.jsonl", fs::copy_options::overwrite_existing);
  fs::copy_file(summary.dir / "cassettes" / "lean.jsonl", dir / "lean.jsonl", fs::copy_options::overwrite_existing);
  std::cout << "replay: run " << summary.run_id << ", " << summary.total << " samples, " << summary.live_calls
            << " chat calls\n";
  std::cout << read_file(summary.dir / "reports" / "report.txt");
  fs::remove_all(tmp);
}

class CalibrationJudge final : public ChatProvider {
 public:
  explicit CalibrationJudge(std::map<int, std::string> replies) : replies_(std::move(replies)) {}
  std::string complete(const PromptBundle& p, const SamplingSpec&) override {
    static const std::regex tag(R"(-- candidate (\d+))");
    std::smatch m;
    const auto text = region_value(p, "statement2");
    if (!std::regex_search(text, m, tag)) throw PreconditionError("untagged calibration prompt");
    return replies_.at(std::stoi(m[1].str()));
  }

 private:
  std::map<int, std::string> replies_;
};

void generate_calibration(const fs::path& fixtures, const std::vector<ProblemInstance>& all) {
  const auto dir = fixtures / "calibration";
  fs::create_directories(dir);
  // Seen 35 true / 11 false, unseen 21 true / 33 false; the judge disagrees
  // with the human label on 17 items, two of them unparseable.
  const std::set<int> disagree = {3, 9, 14, 20, 27, 33, 38, 41, 47, 52, 58, 63, 70, 76, 84, 91, 97};
  const std::set<int> unparsed = {9, 58};
  std::map<int, std::string> replies;
  std::string annotations;
  for (int i = 0; i < 100; ++i) {
    const bool seen = i < 46;
    const int j = seen ? i : i - 46;
    const bool human = seen ? j < 35 : j < 21;
    const auto& inst = all[static_cast<std::size_t>(i) % all.size()];
    std::string generated;
    const auto tag = "-- candidate " + std::to_string(i) + "\n";
    if (seen) {
      generated = tag + (human ? inst.gold_formal_statement : drift(inst));
    } else {
      generated = tag + (human ? inst.gold_conjecture : with_term(inst, wrong_terms().at(inst.id))) + "\n\n" +
                  inst.gold_formal_statement;
    }
    json rec = {{"id", "cal-" + std::to_string(i)},
                {"setting", seen ? "seen" : "unseen"},
                {"generated", generated},
                {"gold_conjecture", inst.gold_conjecture},
                {"gold_formal_statement", inst.gold_formal_statement},
                {"human", human}};
    annotations += rec.dump() + "\n";
    const bool judge = disagree.contains(i) ? !human : human;
    if (unparsed.contains(i)) {
      replies[i] = "The answer depends on conventions I cannot resolve from the statement alone.";
    } else {
      replies[i] = std::string("Comparing the conclusion of the formal statement with the conjecture.\n") +
                   std::string(kConJudgeMarker) + " **" + (judge ? "True" : "False") + "**\n";
    }
  }
  write_file_atomic(dir / "annotations.jsonl", annotations);
  const json doc = {{"name", "judge-calibration"},
                    {"models", {"qwen3-14b"}},
                    {"dataset", "../dataset/sample.jsonl"},
                    {"judge_model", "qwen3-14b"},
                    {"metrics", {"conjudge"}},
                    {"gateway", {{"mode", "replay"}, {"cassettes", {"judge.jsonl"}}}}};
  write_json(dir / "config.json", doc);

  fs::remove(dir / "judge.jsonl");
  auto cassette = std::make_shared<Cassette>();
  cassette->set_writer(dir / "judge.jsonl");
  FakeClock clock;
  auto judge = std::make_shared<CalibrationJudge>(replies);
  Gateway::Options opts;
  opts.mode = GatewayMode::Record;
  opts.clock = &clock;
  Gateway gateway(opts, cassette, [judge](const std::string&) -> std::shared_ptr<ChatProvider> { return judge; });
  const auto result =
      calibrate_judge(gateway, load_annotations(dir / "annotations.jsonl"), judge_sampling("qwen3-14b"));
  std::cout << "calibration: agreement " << result.display() << " (" << result.agreed << "/" << result.total
            << "), parse failures " << result.parse_failures << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: conjbench_fixturegen <tests/fixtures>\n";
    return 2;
  }
  try {
    const fs::path fixtures = argv[1];
    const auto dataset = load_dataset(fixtures / "dataset" / "sample.jsonl");
    generate_replay(fixtures, dataset.instances);
    generate_calibration(fixtures, dataset.instances);
  } catch (const std::exception& e) {
    std::cerr << "fixturegen: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
