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

#include "cli.hpp"

#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "conjbench/config.hpp"
#include "conjbench/dataset.hpp"
#include "conjbench/error.hpp"
#include "conjbench/lean_runner.hpp"
#include "conjbench/lean_text.hpp"
#include "conjbench/leanfire.hpp"
#include "conjbench/metrics.hpp"
#include "conjbench/prompts.hpp"
#include "conjbench/report.hpp"
#include "conjbench/run_store.hpp"

namespace conjbench::cli {

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const IncompleteRun*>(&e)) return kIncompleteRun;
  if (dynamic_cast<const PreflightError*>(&e)) return kPreflightFailure;
  if (dynamic_cast<const RunError*>(&e) || dynamic_cast<const GatewayError*>(&e) ||
      dynamic_cast<const ToolFailure*>(&e)) {
    return kRunFailure;
  }
  if (dynamic_cast<const Error*>(&e)) return kConfigError;
  return kInternal;
}

namespace {

struct Options {
  std::string config;
  std::vector<std::string> overrides;

  std::string dataset;
  bool json = false;

  std::string template_name;
  bool seen = false;
  bool few_shot = false;
  bool hints = false;
  std::string instance;
  std::vector<std::string> vars;
  std::vector<std::string> var_files;

  std::string setting = "unseen";
  int seed_index = 0;
  bool no_few_shot = false;
  std::string generated;

  std::optional<std::size_t> limit;

  std::string run_dir;
  std::string run_id;
  std::string runs_dir;

  std::string annotations;

  std::string workspace;
  std::string lean_command;
};

std::pair<std::string, std::string> split_assignment(const std::string& s) {
  const auto eq = s.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("expected key=value, got `" + s + "`");
  return {s.substr(0, eq), s.substr(eq + 1)};
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split_words(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  for (std::string w; is >> w;) out.push_back(w);
  return out;
}

ExperimentConfig require_config(const Options& o) {
  if (o.config.empty()) throw ConfigError("--config is required");
  return load_config(o.config, o.overrides);
}

Setting require_setting(const std::string& s) {
  const auto v = parse_setting(s);
  if (!v) throw ConfigError("setting must be seen or unseen, got `" + s + "`");
  return *v;
}

const ProblemInstance& require_instance(const Experiment& exp, const std::string& id) {
  for (const auto& inst : exp.instances()) {
    if (inst.id == id) return inst;
  }
  throw ConfigError("instance `" + id + "` is not selected by the config");
}

int cmd_validate(const Options& o, std::ostream& out) {
  std::filesystem::path path = o.dataset;
  if (path.empty()) path = require_config(o).dataset;
  if (path.empty()) throw ConfigError("no dataset given");
  if (!std::filesystem::exists(path)) throw ConfigError("dataset not found: " + path.string());
  const auto ds = load_dataset(path);
  const auto& m = ds.manifest;
  if (o.json) {
    nlohmann::json j = {{"name", m.name}, {"schema_version", m.schema_version}, {"problem_count", m.problem_count}};
    for (auto t : {SolutionType::Numerical, SolutionType::Algebraic, SolutionType::Proof}) {
      j["type_counts"][std::string(to_string(t))] = m.count(t);
    }
    out << j.dump(2) << "\n";
    return kOk;
  }
  out << "dataset: " << m.name << "\n"
      << "schema: " << m.schema_version << "\n"
      << "instances: " << m.problem_count << "\n";
  for (auto t : {SolutionType::Numerical, SolutionType::Algebraic, SolutionType::Proof}) {
    out << to_string(t) << ": " << m.count(t) << "\n";
  }
  return kOk;
}

void print_bundle(const PromptBundle& b, bool json, std::ostream& out) {
  if (json) {
    out << b.to_json().dump(2) << "\n";
    return;
  }
  out << "=== system (" << b.template_id.describe() << ") ===\n"
      << b.system_message << "\n=== user ===\n"
      << b.user_message << "\n";
}

int cmd_render(const Options& o, std::ostream& out) {
  const auto name = parse_template_name(o.template_name);
  if (!name) throw ConfigError("unknown template `" + o.template_name + "`");
  const TemplateId id{*name, o.seen, o.few_shot, o.hints};
  PromptVariables vars;
  if (!o.instance.empty()) {
    if (o.dataset.empty()) throw ConfigError("--instance needs --dataset");
    const auto ds = load_dataset(o.dataset);
    const auto* inst = ds.find(o.instance);
    if (!inst) throw ConfigError("instance `" + o.instance + "` not in dataset");
    if (*name == TemplateName::ConJudge) {
      vars = {{"conjecture", inst->gold_conjecture}, {"statement1", inst->gold_formal_statement}};
    } else {
      vars = autoformalise_variables(*inst, o.seen ? Setting::Seen : Setting::Unseen, std::nullopt);
    }
  }
  for (const auto& v : o.vars) {
    auto [k, val] = split_assignment(v);
    vars[k] = val;
  }
  for (const auto& v : o.var_files) {
    auto [k, path] = split_assignment(v);
    vars[k] = lean::trim(read_text(path));
  }
  const auto exemplars = o.few_shot ? std::span<const SeedExemplar>(seed_exemplars()) : std::span<const SeedExemplar>();
  print_bundle(render(id, vars, exemplars), o.json, out);
  return kOk;
}

int cmd_fire(const Options& o, std::ostream& out, const RunnerHooks& hooks) {
  auto config = require_config(o);
  Experiment exp(config, hooks);
  const auto& inst = require_instance(exp, o.instance);
  const auto setting = require_setting(o.setting);
  if (o.seed_index < 0 || o.seed_index >= config.k) throw ConfigError("--seed-index out of range");
  auto services = make_services(exp.config(), hooks, exp.config().runs_dir / "adhoc");
  FirePipeline pipeline(*services.gateway);
  const auto seed = canonical_seeds(config.k)[static_cast<std::size_t>(o.seed_index)];
  const auto model = config.models.front();
  const FireSampling fs{{config.cot_model.value_or(model), config.temperature, seed, config.max_tokens},
                        {config.lot_model.value_or(model), config.temperature, seed, config.max_tokens}};
  const auto result = pipeline.run_fire(inst, setting, fs, o.no_few_shot ? Ablation::NoFewShot : Ablation::FewShot);
  nlohmann::json j = {{"trace", result.trace.to_json()}, {"trace_digest", result.trace.digest()}};
  if (result.failure) j["failure"] = {{"stage", result.failure->stage}, {"message", result.failure->message}};
  if (o.json) {
    if (result.autoformalise) j["autoformalise"] = result.autoformalise->to_json();
    out << j.dump(2) << "\n";
    return kOk;
  }
  out << j.dump(2) << "\n";
  if (result.autoformalise) print_bundle(*result.autoformalise, false, out);
  return kOk;
}

int cmd_score(const Options& o, std::ostream& out, const RunnerHooks& hooks) {
  auto config = require_config(o);
  Experiment exp(config, hooks);
  const auto& inst = require_instance(exp, o.instance);
  const auto setting = config.task == Task::StandaloneConjecture ? Setting::Unseen : require_setting(o.setting);
  if (o.generated.empty()) throw ConfigError("--generated is required");
  const auto text = read_text(o.generated);
  auto services = make_services(exp.config(), hooks, exp.config().runs_dir / "adhoc");
  const auto extracted = extract_code(text);
  SampleKey key{inst.id, std::string(to_string(config.task)), config.models.front(), "adhoc",
                std::string(to_string(setting)), o.seed_index, 0};
  const auto scored = score_sample(services, exp.config(), inst, setting, extracted.chosen, key);
  for (const auto& v : scored.verdicts) out << v.to_json().dump() << "\n";
  return kOk;
}

int cmd_run(const Options& o, std::ostream& out, const RunnerHooks& hooks) {
  Experiment exp(require_config(o), hooks);
  const auto summary = exp.run(RunOptions{o.limit});
  out << "run: " << summary.run_id << "\n"
      << "store: " << summary.dir.string() << "\n"
      << "samples: " << summary.existing + summary.added << "/" << summary.total << " (" << summary.added
      << " new, " << summary.live_calls << " live calls)\n"
      << "status: " << (summary.complete ? "complete" : "incomplete, rerun to resume") << "\n";
  if (summary.complete) out << "\n" << read_file(summary.dir / "reports" / "report.txt");
  return kOk;
}

int cmd_report(const Options& o, std::ostream& out) {
  std::filesystem::path dir;
  if (!o.run_dir.empty()) {
    dir = o.run_dir;
  } else if (!o.run_id.empty()) {
    std::filesystem::path runs = o.runs_dir;
    if (runs.empty()) runs = o.config.empty() ? std::filesystem::path("runs") : require_config(o).runs_dir;
    dir = runs / o.run_id;
  } else {
    Experiment exp(require_config(o));
    dir = exp.run_dir();
  }
  const auto store = RunStore::open_existing(dir);
  const auto report = build_report(*store);
  write_report(*store, report);
  out << (o.json ? report.to_json().dump(2) + "\n" : report.render_text());
  return kOk;
}

int cmd_calibrate(const Options& o, std::ostream& out, const RunnerHooks& hooks) {
  const auto config = require_config(o);
  if (o.annotations.empty()) throw ConfigError("--annotations is required");
  if (config.judge_model.empty()) throw ConfigError("judge_model is not configured");
  const auto annotations = load_annotations(o.annotations);
  auto services = make_services(config, hooks, config.runs_dir / "adhoc");
  const auto result = calibrate_judge(*services.gateway, annotations, judge_sampling(config.judge_model));
  if (o.json) {
    out << nlohmann::json{{"judge_model", config.judge_model},
                          {"agreed", result.agreed},
                          {"total", result.total},
                          {"agreement", result.agreement()},
                          {"display", result.display()},
                          {"parse_failures", result.parse_failures}}
               .dump(2)
        << "\n";
    return kOk;
  }
  out << "judge: " << config.judge_model << "\n"
      << "agreement: " << result.display() << " (" << result.agreed << "/" << result.total << ")\n"
      << "parse failures: " << result.parse_failures << "\n";
  return kOk;
}

int cmd_leancheck(const Options& o, std::ostream& out) {
  LeanWorkspace ws;
  if (!o.workspace.empty()) {
    ws.root = o.workspace;
  } else {
    const auto config = require_config(o);
    ws.root = config.lean.workspace;
    ws.command = config.lean.command;
  }
  if (ws.root.empty()) throw ConfigError("no Lean workspace given");
  if (!o.lean_command.empty()) ws.command = split_words(o.lean_command);
  try {
    const auto report = check_toolchain(ws);
    out << "toolchain: " << report.pinned << "\n" << "lean: " << report.version_line << "\n";
  } catch (const ToolFailure& e) {
    throw PreflightError(e.what());
  }
  return kOk;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
             const RunnerHooks& hooks) {
  CLI::App app{"Conjecturing and autoformalisation benchmark harness", "conjbench"};
  app.set_help_all_flag("--help-all", "Print help for every subcommand");
  app.set_version_flag("--version", "0.1.0");
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);
  Options o;

  auto add_config = [&](CLI::App* sub, bool required) {
    auto* opt = sub->add_option("-c,--config", o.config, "Experiment config (JSON)");
    if (required) opt->required();
    sub->add_option("--set", o.overrides, "Override a config key, e.g. --set k=2 (repeatable)");
  };

  auto* validate = app.add_subcommand("validate", "Check a dataset file and print its manifest");
  validate->add_option("dataset", o.dataset, "Dataset file (one JSON record per line)");
  add_config(validate, false);
  validate->add_flag("--json", o.json, "Print the manifest as JSON");

  auto* render_cmd = app.add_subcommand("render", "Print a rendered prompt");
  render_cmd->add_option("-t,--template", o.template_name,
                         "cot_gen, lot_gen, autoformalise, standalone_conjecture, conjudge, "
                         "grader_back_translate or grader_compare")
      ->required();
  render_cmd->add_flag("--seen", o.seen, "Show the gold conjecture (autoformalise)");
  render_cmd->add_flag("--few-shot", o.few_shot, "Include the five seed exemplars");
  render_cmd->add_flag("--hints", o.hints, "Include the combined hints section (autoformalise)");
  render_cmd->add_option("--dataset", o.dataset, "Dataset to take instance variables from");
  render_cmd->add_option("--instance", o.instance, "Instance id within --dataset");
  render_cmd->add_option("--var", o.vars, "Bind a variable, e.g. --var query.cot=... (repeatable)");
  render_cmd->add_option("--var-file", o.var_files, "Bind a variable to a file's content: name=path (repeatable)");
  render_cmd->add_flag("--json", o.json, "Print the prompt bundle as JSON");

  auto* fire = app.add_subcommand("fire", "Run the CoT/LoT pipeline for one instance and print the trace");
  add_config(fire, true);
  fire->add_option("--instance", o.instance, "Instance id")->required();
  fire->add_option("--setting", o.setting, "seen or unseen (default unseen)");
  fire->add_option("--seed-index", o.seed_index, "Index into the canonical seed list (default 0)");
  fire->add_flag("--no-few-shot", o.no_few_shot, "Drop the seed exemplars from both stages");
  fire->add_flag("--json", o.json, "Print everything as one JSON document");

  auto* run = app.add_subcommand("run", "Run or resume the experiment grid of a config");
  add_config(run, true);
  run->add_option("--limit", o.limit, "Stop after this many new samples (resume later)");

  auto* score = app.add_subcommand("score", "Score one generated answer with the configured metrics");
  add_config(score, true);
  score->add_option("--instance", o.instance, "Instance id")->required();
  score->add_option("--setting", o.setting, "seen or unseen (default unseen)");
  score->add_option("--generated", o.generated, "File holding the model output")->required();

  auto* report = app.add_subcommand("report", "Rebuild the report of a stored run");
  add_config(report, false);
  report->add_option("--run-dir", o.run_dir, "Run store directory");
  report->add_option("--run-id", o.run_id, "Run id under --runs-dir");
  report->add_option("--runs-dir", o.runs_dir, "Directory holding run stores (default runs)");
  report->add_flag("--json", o.json, "Print the report as JSON");

  auto* calibrate = app.add_subcommand("calibrate", "Measure judge agreement with human annotations");
  add_config(calibrate, true);
  calibrate->add_option("--annotations", o.annotations, "Annotated samples (one JSON record per line)")->required();
  calibrate->add_flag("--json", o.json, "Print the result as JSON");

  auto* leancheck = app.add_subcommand("leancheck", "Check the pinned Lean workspace");
  add_config(leancheck, false);
  leancheck->add_option("--workspace", o.workspace, "Lean workspace directory");
  leancheck->add_option("--lean-command", o.lean_command, "Command that runs lean (default \"lake env lean\")");

  std::vector<std::string> argv_store = {"conjbench"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (validate->parsed()) return cmd_validate(o, out);
    if (render_cmd->parsed()) return cmd_render(o, out);
    if (fire->parsed()) return cmd_fire(o, out, hooks);
    if (run->parsed()) return cmd_run(o, out, hooks);
    if (score->parsed()) return cmd_score(o, out, hooks);
    if (report->parsed()) return cmd_report(o, out);
    if (calibrate->parsed()) return cmd_calibrate(o, out, hooks);
    if (leancheck->parsed()) return cmd_leancheck(o, out);
  } catch (const std::exception& e) {
    err << "conjbench: " << e.what() << "\n";
    return exit_code_for(e);
  }
  return kUsage;
}

}  // namespace conjbench::cli
