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

#include "conjbench/runner.hpp"

#include <condition_variable>
#include <exception>
#include <map>
#include <mutex>
#include <thread>

#include "conjbench/cassette.hpp"
#include "conjbench/digest.hpp"
#include "conjbench/error.hpp"
#include "conjbench/lean_runner.hpp"
#include "conjbench/lean_text.hpp"
#include "conjbench/leanfire.hpp"
#include "conjbench/metrics.hpp"
#include "conjbench/rate_limiter.hpp"
#include "conjbench/report.hpp"

namespace conjbench {

namespace {

// Applies the configured per-kind timeouts before delegating.
class TimeoutRunner final : public LeanRunner {
 public:
  TimeoutRunner(std::shared_ptr<LeanRunner> inner, std::chrono::milliseconds typecheck,
                std::chrono::milliseconds equiv)
      : inner_(std::move(inner)), typecheck_(typecheck), equiv_(equiv) {}

  LeanOutcome run(const LeanJob& job) override {
    LeanJob j = job;
    j.timeout = job.kind == LeanJobKind::Typecheck ? typecheck_ : equiv_;
    return inner_->run(j);
  }

 private:
  std::shared_ptr<LeanRunner> inner_;
  std::chrono::milliseconds typecheck_;
  std::chrono::milliseconds equiv_;
};

bool is_word_char(unsigned char c) { return std::isalnum(c) || c == '_' || c == '.' || c >= 0x80; }

std::size_t count_token(std::string_view haystack, std::string_view needle) {
  if (needle.empty()) return 0;
  std::size_t count = 0;
  for (auto pos = haystack.find(needle); pos != std::string_view::npos; pos = haystack.find(needle, pos + 1)) {
    const bool left_ok = pos == 0 || !is_word_char(static_cast<unsigned char>(haystack[pos - 1])) ||
                         !is_word_char(static_cast<unsigned char>(needle.front()));
    const auto end = pos + needle.size();
    const bool right_ok = end >= haystack.size() || !is_word_char(static_cast<unsigned char>(haystack[end])) ||
                          !is_word_char(static_cast<unsigned char>(needle.back()));
    if (left_ok && right_ok) ++count;
  }
  return count;
}

std::string assemble_source(std::initializer_list<std::string_view> parts) {
  std::string out;
  for (const auto p : parts) {
    if (!out.empty()) out += "\n\n";
    out += lean::trim(p);
  }
  return out + "\n";
}

}  // namespace

void check_unseen_prompt(const PromptBundle& prompt, const ProblemInstance& instance) {
  if (prompt.template_id.seen) {
    throw RunError("prompt " + prompt.template_id.describe() + " for " + instance.id +
                   " is a seen prompt in a hidden-conjecture cell");
  }
  for (const auto& r : prompt.regions) {
    if (r.origin != RegionOrigin::Variable) continue;
    const auto text = lean::normalize_whitespace(std::string_view(prompt.user_message).substr(r.begin, r.end - r.begin));
    for (const auto* gold : {&instance.gold_conjecture, &instance.gold_formal_statement}) {
      const auto needle = lean::normalize_whitespace(*gold);
      if (!needle.empty() && text.find(needle) != std::string::npos) {
        throw RunError("gold text of " + instance.id + " leaked into prompt " + prompt.content_hash);
      }
    }
  }
}

std::string gold_term(const ProblemInstance& instance) {
  const auto body = lean::declaration_body(instance.gold_conjecture);
  return body ? lean::normalize_whitespace(*body) : std::string();
}

std::size_t count_unmasked_occurrences(const nlohmann::json& stored_prompt, std::string_view term) {
  const auto user = stored_prompt.at("user").get<std::string>();
  std::size_t count = 0;
  for (const auto& r : stored_prompt.at("regions")) {
    if (r.at("origin").get<std::string>() != "variable") continue;
    const auto begin = r.at("begin").get<std::size_t>();
    const auto end = r.at("end").get<std::size_t>();
    count += count_token(lean::normalize_whitespace(std::string_view(user).substr(begin, end - begin)), term);
  }
  return count;
}

struct Experiment::Impl {
  std::unique_ptr<RunStore> store;
  std::shared_ptr<Cassette> cassette;
  std::shared_ptr<Gateway> gateway;
  std::shared_ptr<LeanRunner> lean;
  std::optional<BeqChecker> beq;
};

namespace {

struct GridTask {
  std::size_t cell;
  std::size_t instance;
  int seed_index;
};

struct SampleOutcome {
  SampleRecord record;
  std::vector<PromptBundle> prompts;
};

Setting as_setting(RunSetting s) { return s == RunSetting::Seen ? Setting::Seen : Setting::Unseen; }

}  // namespace

Experiment::Experiment(ExperimentConfig config, RunnerHooks hooks)
    : config_(std::move(config)), hooks_(std::move(hooks)) {
  validate_config(config_);
  if (!std::filesystem::exists(config_.dataset)) {
    throw ConfigError("dataset not found: " + config_.dataset.string());
  }
  const auto dataset = load_dataset(config_.dataset);
  InstanceFilter filter;
  filter.solution_type = config_.solution_type;
  if (config_.instance_ids) {
    filter.ids = std::set<std::string>(config_.instance_ids->begin(), config_.instance_ids->end());
    for (const auto& id : *config_.instance_ids) {
      if (!dataset.find(id)) throw ConfigError("instance `" + id + "` is not in the dataset");
    }
  }
  instances_ = filter_instances(dataset.instances, filter);
  if (instances_.empty()) throw ConfigError("no instances selected");
  for (const auto& inst : instances_) {
    if (is_seed_id(inst.id)) {
      throw ConfigError("seed exemplar `" + inst.id + "` cannot be an evaluation instance");
    }
  }
  dataset_digest_ = sha256_hex(serialize_dataset(instances_));
  run_id_ = json_digest({{"identity", config_.identity()}, {"dataset", dataset_digest_}}).substr(0, 16);
}

Experiment::~Experiment() = default;

std::vector<Cell> Experiment::cells() const {
  std::vector<Cell> out;
  for (const auto& model : config_.models) {
    for (const auto method : config_.methods) {
      for (const auto setting : config_.settings) out.push_back({model, method, setting});
    }
  }
  return out;
}

nlohmann::json Experiment::store_config() const {
  auto instances = nlohmann::json::array();
  for (const auto& inst : instances_) {
    instances.push_back({{"id", inst.id}, {"solution_type", to_string(inst.solution_type)}});
  }
  auto cells_json = nlohmann::json::array();
  for (const auto& c : cells()) {
    cells_json.push_back({{"model", c.model}, {"method", to_string(c.method)}, {"setting", to_string(c.setting)}});
  }
  return {{"run_id", run_id_},
          {"identity", config_.identity()},
          {"dataset_digest", dataset_digest_},
          {"instances", instances},
          {"cells", cells_json}};
}

namespace {

std::vector<std::string> models_in_use(const ExperimentConfig& c) {
  std::set<std::string> models(c.models.begin(), c.models.end());
  const auto metrics = c.effective_metrics();
  auto uses = [&](Metric m) { return std::find(metrics.begin(), metrics.end(), m) != metrics.end(); };
  const bool fire = std::any_of(c.methods.begin(), c.methods.end(), [](Method m) { return m != Method::Baseline; });
  if (fire && c.cot_model) models.insert(*c.cot_model);
  if (fire && c.lot_model) models.insert(*c.lot_model);
  if (uses(Metric::ConJudge)) models.insert(c.judge_model);
  if (uses(Metric::Grader)) {
    models.insert(c.grader_math_model);
    models.insert(c.grader_judge_model);
  }
  return {models.begin(), models.end()};
}

ProviderResolver config_providers(const ExperimentConfig& c) {
  auto cache = std::make_shared<std::map<std::string, std::shared_ptr<ChatProvider>>>();
  auto mu = std::make_shared<std::mutex>();
  auto endpoints = c.endpoints;
  return [cache, mu, endpoints](const std::string& model) -> std::shared_ptr<ChatProvider> {
    std::lock_guard lock(*mu);
    if (auto it = cache->find(model); it != cache->end()) return it->second;
    const auto ep = endpoints.find(model);
    if (ep == endpoints.end()) return nullptr;
    auto provider = std::make_shared<HttpChatProvider>(ep->second);
    (*cache)[model] = provider;
    return provider;
  };
}

}  // namespace

Services make_services(const ExperimentConfig& config, const RunnerHooks& hooks,
                       const std::filesystem::path& record_dir) {
  Services services;
  services.cassette = std::make_shared<Cassette>();
  for (const auto& p : config.gateway.cassettes) services.cassette->load(p);
  const auto own_chat = record_dir / "chat.jsonl";
  services.cassette->load(own_chat);
  if (config.gateway.mode == GatewayMode::Record) services.cassette->set_writer(own_chat);
  Gateway::Options gopts;
  gopts.mode = config.gateway.mode;
  gopts.retry = config.gateway.retry;
  gopts.clock = hooks.clock;
  if (config.gateway.rate_requests) {
    gopts.limiter = std::make_shared<RateLimiter>(*config.gateway.rate_requests, config.gateway.rate_interval,
                                                  hooks.clock ? *hooks.clock : SystemClock::instance());
  }
  services.gateway = std::make_shared<Gateway>(gopts, services.cassette,
                                               hooks.providers ? hooks.providers : config_providers(config));

  std::shared_ptr<LeanRunner> lean;
  auto live = [&]() -> std::shared_ptr<LeanRunner> {
    if (hooks.lean_live) return hooks.lean_live;
    return std::make_shared<ProcessLeanRunner>(LeanWorkspace{config.lean.workspace, "Scratch", config.lean.command});
  };
  if (config.lean.mode == LeanMode::Live) {
    lean = live();
  } else {
    auto outcomes = std::make_shared<OutcomeCassette>();
    for (const auto& p : config.lean.outcomes) outcomes->load(p);
    const auto own_lean = record_dir / "lean.jsonl";
    outcomes->load(own_lean);
    if (config.lean.mode == LeanMode::Record) {
      outcomes->set_writer(own_lean);
      lean = std::make_shared<RecordingLeanRunner>(live(), outcomes);
    } else {
      lean = std::make_shared<ReplayLeanRunner>(outcomes);
    }
  }
  lean = std::make_shared<TimeoutRunner>(lean, config.lean.typecheck_timeout, config.lean.equiv_timeout);
  services.lean =
      std::make_shared<LeanPool>(lean, config.lean.workers > 0 ? config.lean.workers : default_lean_workers());
  if (config.beq_command) {
    services.beq = BeqChecker{*config.beq_command, std::chrono::minutes(10),
                              std::filesystem::temp_directory_path() / "conjbench-beq"};
  }
  return services;
}

ScoredSample score_sample(const Services& services, const ExperimentConfig& config,
                          const ProblemInstance& inst, Setting setting, std::string_view generated,
                          const SampleKey& key) {
  ScoredSample out;
  const auto metrics = config.effective_metrics();
  const bool empty = lean::trim(generated).empty();

  std::optional<LeanVerdict> typecheck;
  auto lean_entry = [&](Metric m, const LeanVerdict& lv) {
    if (!lv.job || !lv.outcome) return;
    out.lean.push_back({{"metric", to_string(m)},
                        {"job_id", lv.job->job_id},
                        {"status", to_string(lv.outcome->status)},
                        {"wall_ms", lv.outcome->wall_time.count()}});
  };
  auto get_typecheck = [&]() -> const LeanVerdict& {
    if (!typecheck) {
      typecheck = score_typecheck(*services.lean, inst, generated, setting);
      lean_entry(Metric::Typecheck, *typecheck);
    }
    return *typecheck;
  };
  auto judge_verdict = [&](Metric m, const JudgeOutcome& jo) {
    for (const auto& c : jo.calls) out.judge_calls.push_back(c.request_digest);
    return Verdict{m, jo.value, jo.status, jo.evidence, key};
  };
  const auto judge_spec = judge_sampling(config.judge_model);

  for (const auto m : metrics) {
    switch (m) {
      case Metric::Typecheck: {
        const auto& lv = get_typecheck();
        out.verdicts.push_back({m, lv.value, lv.status, lv.evidence, key});
        break;
      }
      case Metric::BeqPlus: {
        if (!services.beq) {
          out.verdicts.push_back({m, false, VerdictStatus::NotRun, "no checker configured", key});
          break;
        }
        const auto& tc = get_typecheck();
        const auto gold_source =
            assemble_source({inst.environment_header, inst.gold_conjecture, inst.gold_formal_statement});
        const auto lv = score_beq_plus(services.beq, gold_source, tc.job ? tc.job->source : "", tc.value);
        out.verdicts.push_back({m, lv.value, lv.status, lv.evidence, key});
        break;
      }
      case Metric::EquivRfl: {
        const auto lv = score_equiv_rfl(*services.lean, inst.gold_conjecture, generated, inst.environment_header);
        lean_entry(m, lv);
        out.verdicts.push_back({m, lv.value, lv.status, lv.evidence, key});
        break;
      }
      case Metric::ConJudge: {
        if (empty) {
          out.verdicts.push_back({m, false, VerdictStatus::Ok, "empty generation", key});
          break;
        }
        out.verdicts.push_back(judge_verdict(
            m, judge_conjudge(*services.gateway, generated, inst.gold_conjecture, inst.gold_formal_statement,
                              judge_spec)));
        break;
      }
      case Metric::Grader: {
        if (empty) {
          out.verdicts.push_back({m, false, VerdictStatus::Ok, "empty generation", key});
          break;
        }
        const auto gold = assemble_source({inst.gold_conjecture, inst.gold_formal_statement});
        const auto mine = setting == Setting::Seen ? assemble_source({inst.gold_conjecture, generated})
                                                   : assemble_source({generated});
        out.verdicts.push_back(judge_verdict(
            m, score_grader(*services.gateway, gold, mine, judge_sampling(config.grader_math_model),
                            judge_sampling(config.grader_judge_model))));
        break;
      }
    }
  }
  return out;
}

void Experiment::preflight() {
  const auto providers = hooks_.providers ? hooks_.providers : config_providers(config_);
  if (config_.gateway.mode == GatewayMode::Replay) {
    for (const auto& p : config_.gateway.cassettes) {
      if (!std::filesystem::exists(p)) throw PreflightError("cassette not found: " + p.string());
    }
  } else {
    for (const auto& model : models_in_use(config_)) {
      if (!providers(model)) throw PreflightError("no endpoint configured for model `" + model + "`");
    }
  }
  if (config_.lean.mode == LeanMode::Replay) {
    for (const auto& p : config_.lean.outcomes) {
      if (!std::filesystem::exists(p)) throw PreflightError("Lean outcome file not found: " + p.string());
    }
  } else if (!hooks_.lean_live) {
    LeanWorkspace ws{config_.lean.workspace, "Scratch", config_.lean.command};
    try {
      check_toolchain(ws);
    } catch (const ToolFailure& e) {
      throw PreflightError(std::string("Lean workspace: ") + e.what());
    }
  }
}

RunSummary Experiment::run(const RunOptions& options) {
  preflight();
  impl_ = std::make_unique<Impl>();
  auto& impl = *impl_;
  impl.store = RunStore::open_or_create(config_.runs_dir, run_id_, store_config());
  auto& store = *impl.store;

  auto services = make_services(config_, hooks_, store.cassette_dir());
  impl.cassette = services.cassette;
  impl.gateway = services.gateway;
  impl.lean = services.lean;
  impl.beq = services.beq;

  const auto grid_cells = cells();
  std::vector<GridTask> grid;
  for (std::size_t c = 0; c < grid_cells.size(); ++c) {
    for (std::size_t i = 0; i < instances_.size(); ++i) {
      for (int s = 0; s < config_.k; ++s) grid.push_back({c, i, s});
    }
  }
  const auto metrics = config_.effective_metrics();
  const auto seeds = canonical_seeds(config_.k);

  auto make_key = [&](const GridTask& t) {
    const auto& cell = grid_cells[t.cell];
    return SampleKey{instances_[t.instance].id, std::string(to_string(config_.task)), cell.model,
                     std::string(to_string(cell.method)), std::string(to_string(cell.setting)),
                     t.seed_index, seeds[static_cast<std::size_t>(t.seed_index)]};
  };

  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!store.contains(make_key(grid[i]).str())) pending.push_back(i);
  }
  RunSummary summary;
  summary.run_id = run_id_;
  summary.dir = store.dir();
  summary.total = grid.size();
  summary.existing = grid.size() - pending.size();
  if (options.limit && pending.size() > *options.limit) pending.resize(*options.limit);

  FirePipeline pipeline(*impl.gateway);
  auto failed_verdicts = [&](const std::string& reason) {
    std::vector<Verdict> out;
    for (const auto m : metrics) {
      Verdict v;
      v.metric = m;
      v.value = false;
      v.evidence = reason;
      if (m == Metric::BeqPlus && !impl.beq) {
        v.status = VerdictStatus::NotRun;
        v.evidence = "no checker configured";
      } else if (m == Metric::BeqPlus) {
        v.status = VerdictStatus::Skipped;
        v.evidence = std::string(kPresupposesTypechecking);
      }
      out.push_back(std::move(v));
    }
    return out;
  };

  auto process = [&](const GridTask& t) -> SampleOutcome {
    const auto& inst = instances_[t.instance];
    const auto& cell = grid_cells[t.cell];
    const auto setting = as_setting(cell.setting);
    SampleOutcome out;
    auto& rec = out.record;
    rec.key = make_key(t);
    rec.solution_type = std::string(to_string(inst.solution_type));
    const SamplingSpec spec{cell.model, config_.temperature, rec.key.seed, config_.max_tokens};

    std::optional<PromptBundle> generation;
    if (config_.task == Task::StandaloneConjecture) {
      generation = render({TemplateName::StandaloneConjecture},
                          {{"query.informal_statement", inst.informal_statement}});
    } else if (cell.method == Method::Baseline) {
      generation = render({TemplateName::Autoformalise, setting == Setting::Seen, false, false},
                          autoformalise_variables(inst, setting, std::nullopt));
    } else {
      const FireSampling fs{
          {config_.cot_model.value_or(cell.model), config_.temperature, rec.key.seed, config_.max_tokens},
          {config_.lot_model.value_or(cell.model), config_.temperature, rec.key.seed, config_.max_tokens}};
      const auto ablation = cell.method == Method::LeanFire ? Ablation::FewShot : Ablation::NoFewShot;
      auto fire = pipeline.run_fire(inst, setting, fs, ablation);
      for (const auto* stage : {&fire.trace.cot_stage, &fire.trace.lot_stage}) {
        if (stage->prompt.content_hash.empty()) continue;
        rec.prompt_hashes[stage == &fire.trace.cot_stage ? "cot" : "lot"] = stage->prompt.content_hash;
        out.prompts.push_back(stage->prompt);
      }
      rec.fire = fire.trace.to_json();
      if (fire.failure) {
        rec.failure = nlohmann::json{{"stage", fire.failure->stage}, {"message", fire.failure->message}};
      } else {
        generation = std::move(fire.autoformalise);
      }
    }
    if (generation) {
      rec.prompt_hashes["generation"] = generation->content_hash;
      out.prompts.push_back(*generation);
    }
    if (cell.setting != RunSetting::Seen) {
      for (const auto& p : out.prompts) check_unseen_prompt(p, inst);
    }
    if (rec.failure) {
      rec.verdicts = failed_verdicts("stage " + rec.failure->at("stage").get<std::string>() + " failed");
      for (auto& v : rec.verdicts) v.key = rec.key;
      return out;
    }

    const auto completion = impl.gateway->complete(*generation, spec);
    rec.completion_text = completion.text;
    rec.request_digest = completion.request_digest;
    rec.recorded_at = completion.recorded_at;
    rec.latency_ms = completion.latency.count();
    const auto extracted = extract_code(completion.text);
    rec.extracted = extracted;
    auto scored = score_sample(services, config_, inst, setting, extracted.chosen, rec.key);
    rec.verdicts = std::move(scored.verdicts);
    rec.lean = std::move(scored.lean);
    rec.judge_calls = std::move(scored.judge_calls);
    return out;
  };

  std::mutex mu;
  std::size_t next = 0;
  std::size_t commit_pos = 0;
  std::map<std::size_t, SampleOutcome> buffer;
  std::exception_ptr error;
  bool stop = false;

  auto worker = [&]() {
    while (true) {
      std::size_t pos;
      {
        std::lock_guard lock(mu);
        if (stop || next >= pending.size()) return;
        pos = next++;
      }
      try {
        auto result = process(grid[pending[pos]]);
        std::lock_guard lock(mu);
        buffer.emplace(pos, std::move(result));
        while (!error && buffer.contains(commit_pos)) {
          auto node = buffer.extract(commit_pos);
          store.commit(node.mapped().record, node.mapped().prompts);
          ++commit_pos;
        }
      } catch (...) {
        std::lock_guard lock(mu);
        if (!error) error = std::current_exception();
        stop = true;
        return;
      }
    }
  };

  const auto threads = std::min<std::size_t>(static_cast<std::size_t>(config_.workers), std::max<std::size_t>(pending.size(), 1));
  std::vector<std::thread> pool;
  for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  summary.added = commit_pos;
  summary.live_calls = impl.gateway->live_calls();
  if (error) {
    try {
      std::rethrow_exception(error);
    } catch (const Error& e) {
      throw RunError(std::string("run ") + run_id_ + " stopped after " + std::to_string(store.size()) +
                     " stored samples: " + e.what());
    } catch (const std::exception& e) {
      throw RunError(std::string("run ") + run_id_ + " stopped: " + e.what());
    }
  }
  summary.complete = store.size() == grid.size();
  if (summary.complete) write_report(store, build_report(store));
  return summary;
}

}  // namespace conjbench
