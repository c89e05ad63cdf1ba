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

#include "conjbench/config.hpp"

#include <fstream>

#include "conjbench/error.hpp"
#include "conjbench/sampling.hpp"

namespace conjbench {

std::string_view to_string(Task t) {
  return t == Task::Autoformalise ? "autoformalise" : "standalone_conjecture";
}

std::string_view to_string(Method m) {
  switch (m) {
    case Method::Baseline:
      return "baseline";
    case Method::LeanFire:
      return "leanfire";
    case Method::LeanFireNoFS:
      return "leanfire_no_fs";
  }
  return "?";
}

std::string_view to_string(RunSetting s) {
  switch (s) {
    case RunSetting::Seen:
      return "seen";
    case RunSetting::Unseen:
      return "unseen";
    case RunSetting::NotApplicable:
      return "not_applicable";
  }
  return "?";
}

std::optional<Task> parse_task(std::string_view s) {
  if (s == "autoformalise") return Task::Autoformalise;
  if (s == "standalone_conjecture") return Task::StandaloneConjecture;
  return std::nullopt;
}

std::optional<Method> parse_method(std::string_view s) {
  for (auto m : {Method::Baseline, Method::LeanFire, Method::LeanFireNoFS}) {
    if (to_string(m) == s) return m;
  }
  return std::nullopt;
}

std::optional<RunSetting> parse_run_setting(std::string_view s) {
  for (auto v : {RunSetting::Seen, RunSetting::Unseen, RunSetting::NotApplicable}) {
    if (to_string(v) == s) return v;
  }
  return std::nullopt;
}

std::string_view to_string(LeanMode m) {
  switch (m) {
    case LeanMode::Live:
      return "live";
    case LeanMode::Record:
      return "record";
    case LeanMode::Replay:
      return "replay";
  }
  return "?";
}

std::vector<Metric> default_metrics(Task task) {
  if (task == Task::StandaloneConjecture) return {Metric::EquivRfl};
  return {Metric::Typecheck, Metric::BeqPlus, Metric::Grader, Metric::ConJudge};
}

std::vector<Metric> ExperimentConfig::effective_metrics() const {
  return metrics.empty() ? default_metrics(task) : metrics;
}

nlohmann::json ExperimentConfig::identity() const {
  auto names = [](const auto& xs) {
    auto a = nlohmann::json::array();
    for (const auto& x : xs) a.push_back(to_string(x));
    return a;
  };
  nlohmann::json j = {{"name", name},
                      {"task", to_string(task)},
                      {"methods", names(methods)},
                      {"settings", names(settings)},
                      {"models", models},
                      {"k", k},
                      {"pass_mode", to_string(pass_mode)},
                      {"judge_model", judge_model},
                      {"grader_math_model", grader_math_model},
                      {"grader_judge_model", grader_judge_model},
                      {"cot_model", cot_model ? nlohmann::json(*cot_model) : nlohmann::json()},
                      {"lot_model", lot_model ? nlohmann::json(*lot_model) : nlohmann::json()},
                      {"temperature", temperature},
                      {"max_tokens", max_tokens ? nlohmann::json(*max_tokens) : nlohmann::json()},
                      {"metrics", names(effective_metrics())},
                      {"seeds", canonical_seeds(k)},
                      {"judge_sampling", judge_sampling(judge_model).to_json()},
                      {"beq_plus", beq_command ? nlohmann::json(*beq_command) : nlohmann::json()}};
  j["instances"] = instance_ids ? nlohmann::json(*instance_ids) : nlohmann::json();
  j["solution_type"] = solution_type ? nlohmann::json(to_string(*solution_type)) : nlohmann::json();
  return j;
}

namespace {

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  const std::filesystem::path path(p);
  if (path.empty() || path.is_absolute()) return path;
  return (base / path).lexically_normal();
}

template <typename T, typename Parse>
std::vector<T> parse_list(const nlohmann::json& j, std::string_view key, Parse parse) {
  std::vector<T> out;
  for (const auto& item : j) {
    const auto s = item.get<std::string>();
    const auto v = parse(s);
    if (!v) throw ConfigError(std::string(key) + ": unknown value `" + s + "`");
    out.push_back(*v);
  }
  return out;
}

std::vector<std::string> string_list(const nlohmann::json& j) {
  if (j.is_string()) return {j.get<std::string>()};
  return j.get<std::vector<std::string>>();
}

}  // namespace

ExperimentConfig config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir) {
  static const std::set<std::string> known = {
      "name",        "task",       "methods",     "settings",  "models",    "k",
      "pass_mode",   "dataset",    "instances",   "solution_type", "judge_model", "grader",
      "stage_models", "temperature", "max_tokens", "metrics",  "gateway",   "endpoints",
      "lean",        "beq_plus",   "workers",     "runs_dir"};
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (!known.contains(key)) throw ConfigError("unknown config key `" + key + "`");
  }
  ExperimentConfig c;
  try {
    c.name = j.value("name", c.name);
    if (j.contains("task")) {
      const auto t = parse_task(j["task"].get<std::string>());
      if (!t) throw ConfigError("task: unknown value " + j["task"].dump());
      c.task = *t;
    }
    if (j.contains("methods")) c.methods = parse_list<Method>(j["methods"], "methods", parse_method);
    if (j.contains("settings")) {
      c.settings = parse_list<RunSetting>(j["settings"], "settings", parse_run_setting);
    } else if (c.task == Task::StandaloneConjecture) {
      c.settings = {RunSetting::NotApplicable};
    }
    if (j.contains("models")) c.models = string_list(j["models"]);
    c.k = j.value("k", c.k);
    if (j.contains("pass_mode")) {
      const auto m = parse_pass_mode(j["pass_mode"].get<std::string>());
      if (!m) throw ConfigError("pass_mode: unknown value " + j["pass_mode"].dump());
      c.pass_mode = *m;
    }
    if (j.contains("dataset")) c.dataset = resolve(base_dir, j["dataset"].get<std::string>());
    if (j.contains("instances") && !j["instances"].is_null()) {
      c.instance_ids = j["instances"].get<std::vector<std::string>>();
    }
    if (j.contains("solution_type") && !j["solution_type"].is_null()) {
      const auto t = parse_solution_type(j["solution_type"].get<std::string>());
      if (!t) throw ConfigError("solution_type: unknown value " + j["solution_type"].dump());
      c.solution_type = *t;
    }
    c.judge_model = j.value("judge_model", "");
    if (j.contains("grader")) {
      const auto& g = j["grader"];
      c.grader_math_model = g.value("math_model", "");
      c.grader_judge_model = g.value("judge_model", "");
    }
    if (j.contains("stage_models")) {
      const auto& s = j["stage_models"];
      if (s.contains("cot") && !s["cot"].is_null()) c.cot_model = s["cot"].get<std::string>();
      if (s.contains("lot") && !s["lot"].is_null()) c.lot_model = s["lot"].get<std::string>();
    }
    c.temperature = j.value("temperature", c.temperature);
    if (j.contains("max_tokens") && !j["max_tokens"].is_null()) c.max_tokens = j["max_tokens"].get<int>();
    if (j.contains("metrics")) c.metrics = parse_list<Metric>(j["metrics"], "metrics", parse_metric);
    if (j.contains("gateway")) {
      const auto& g = j["gateway"];
      if (g.contains("mode")) {
        const auto m = parse_gateway_mode(g["mode"].get<std::string>());
        if (!m) throw ConfigError("gateway.mode: unknown value " + g["mode"].dump());
        c.gateway.mode = *m;
      }
      if (g.contains("cassettes")) {
        for (const auto& p : string_list(g["cassettes"])) c.gateway.cassettes.push_back(resolve(base_dir, p));
      }
      if (g.contains("rate_limit") && !g["rate_limit"].is_null()) {
        c.gateway.rate_requests = g["rate_limit"].at("requests").get<std::size_t>();
        c.gateway.rate_interval =
            std::chrono::milliseconds(g["rate_limit"].value("interval_ms", 60000));
      }
      c.gateway.retry.max_retries = g.value("retries", c.gateway.retry.max_retries);
      c.gateway.retry.initial_backoff =
          std::chrono::milliseconds(g.value("backoff_ms", c.gateway.retry.initial_backoff.count()));
    }
    if (j.contains("endpoints")) {
      for (const auto& [model, e] : j["endpoints"].items()) {
        EndpointConfig ep;
        ep.base_url = e.at("base_url").get<std::string>();
        ep.path = e.value("path", ep.path);
        ep.api_key_env = e.value("api_key_env", "");
        ep.remote_model = e.value("remote_model", "");
        ep.timeout = std::chrono::seconds(e.value("timeout_s", 300));
        c.endpoints[model] = ep;
      }
    }
    if (j.contains("lean")) {
      const auto& l = j["lean"];
      if (l.contains("mode")) {
        const auto s = l["mode"].get<std::string>();
        if (s == "live") c.lean.mode = LeanMode::Live;
        else if (s == "record") c.lean.mode = LeanMode::Record;
        else if (s == "replay") c.lean.mode = LeanMode::Replay;
        else throw ConfigError("lean.mode: unknown value `" + s + "`");
      }
      if (l.contains("workspace")) c.lean.workspace = resolve(base_dir, l["workspace"].get<std::string>());
      if (l.contains("outcomes")) {
        for (const auto& p : string_list(l["outcomes"])) c.lean.outcomes.push_back(resolve(base_dir, p));
      }
      c.lean.workers = l.value("workers", c.lean.workers);
      if (l.contains("command")) c.lean.command = string_list(l["command"]);
      c.lean.typecheck_timeout =
          std::chrono::milliseconds(l.value("typecheck_timeout_s", 300) * 1000LL);
      c.lean.equiv_timeout = std::chrono::milliseconds(l.value("equiv_timeout_s", 60) * 1000LL);
    }
    if (j.contains("beq_plus") && !j["beq_plus"].is_null()) {
      c.beq_command = string_list(j["beq_plus"].at("command"));
    }
    c.workers = j.value("workers", c.workers);
    if (j.contains("runs_dir")) c.runs_dir = resolve(base_dir, j["runs_dir"].get<std::string>());
    else c.runs_dir = resolve(base_dir, "runs");
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  validate_config(c);
  return c;
}

void validate_config(ExperimentConfig& c) {
  if (c.k < 1 || c.k > static_cast<int>(kCanonicalSeeds.size())) {
    throw ConfigError("k must be between 1 and 10, got " + std::to_string(c.k));
  }
  if (c.models.empty()) throw ConfigError("no models configured");
  if (c.methods.empty()) throw ConfigError("no methods configured");
  if (c.settings.empty()) throw ConfigError("no settings configured");
  if (c.dataset.empty()) throw ConfigError("no dataset configured");
  if (c.workers < 1) throw ConfigError("workers must be at least 1");
  if (c.temperature < 0) throw ConfigError("temperature must be non-negative");
  if (c.task == Task::StandaloneConjecture) {
    for (auto s : c.settings) {
      if (s != RunSetting::NotApplicable) {
        throw ConfigError("standalone_conjecture has no seen/unseen setting");
      }
    }
    for (auto m : c.methods) {
      if (m != Method::Baseline) throw ConfigError("Lean-FIRe methods apply to autoformalise only");
    }
    for (auto m : c.effective_metrics()) {
      if (m != Metric::EquivRfl) {
        throw ConfigError("standalone_conjecture is scored by equiv_rfl only");
      }
    }
  } else {
    for (auto s : c.settings) {
      if (s == RunSetting::NotApplicable) throw ConfigError("autoformalise needs seen or unseen");
    }
    for (auto m : c.effective_metrics()) {
      if (m == Metric::EquivRfl) throw ConfigError("equiv_rfl scores standalone_conjecture only");
    }
  }
  const auto metrics = c.effective_metrics();
  auto uses = [&](Metric m) { return std::find(metrics.begin(), metrics.end(), m) != metrics.end(); };
  if (uses(Metric::ConJudge) && c.judge_model.empty()) throw ConfigError("conjudge needs judge_model");
  if (c.grader_math_model.empty()) c.grader_math_model = c.judge_model;
  if (c.grader_judge_model.empty()) c.grader_judge_model = c.judge_model;
  if (uses(Metric::Grader) && (c.grader_math_model.empty() || c.grader_judge_model.empty())) {
    throw ConfigError("grader needs grader.math_model and grader.judge_model (or judge_model)");
  }
  const bool needs_lean = uses(Metric::Typecheck) || uses(Metric::EquivRfl) || uses(Metric::BeqPlus);
  if (needs_lean && c.lean.mode != LeanMode::Replay && c.lean.workspace.empty()) {
    throw ConfigError("lean.workspace is required unless lean.mode is replay");
  }
  if (needs_lean && c.lean.mode == LeanMode::Replay && c.lean.outcomes.empty()) {
    throw ConfigError("lean.mode replay needs lean.outcomes");
  }
  if (c.gateway.mode == GatewayMode::Replay && c.gateway.cassettes.empty()) {
    throw ConfigError("gateway.mode replay needs gateway.cassettes");
  }
}

void apply_override(nlohmann::json& doc, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw ConfigError("override must look like key=value: `" + std::string(assignment) + "`");
  }
  const std::string key(assignment.substr(0, eq));
  const std::string raw(assignment.substr(eq + 1));
  auto value = nlohmann::json::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;
  nlohmann::json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const auto part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) throw ConfigError("empty component in override key `" + key + "`");
    if (!node->is_object()) *node = nlohmann::json::object();
    if (dot == std::string::npos) {
      (*node)[part] = value;
      return;
    }
    node = &(*node)[part];
    start = dot + 1;
  }
}

ExperimentConfig load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  auto doc = nlohmann::json::parse(in, nullptr, false);
  if (doc.is_discarded()) throw ConfigError("config " + path.string() + " is not valid JSON");
  for (const auto& o : overrides) apply_override(doc, o);
  return config_from_json(doc, std::filesystem::absolute(path).parent_path());
}

}  // namespace conjbench
