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

#include "conjbench/run_store.hpp"

#include <fstream>
#include <sstream>

#include "conjbench/cassette.hpp"
#include "conjbench/error.hpp"

namespace conjbench {

nlohmann::json SampleRecord::to_json() const {
  auto verdicts_json = nlohmann::json::array();
  for (const auto& v : verdicts) {
    verdicts_json.push_back({{"metric", to_string(v.metric)},
                             {"value", v.value},
                             {"status", to_string(v.status)},
                             {"evidence", v.evidence}});
  }
  return {{"key", key.to_json()},
          {"solution_type", solution_type},
          {"prompts", prompt_hashes},
          {"completion",
           {{"text", completion_text},
            {"request_digest", request_digest},
            {"recorded_at", recorded_at},
            {"latency_ms", latency_ms}}},
          {"fire", fire ? *fire : nlohmann::json()},
          {"extracted", extracted ? extracted->to_json() : nlohmann::json()},
          {"failure", failure ? *failure : nlohmann::json()},
          {"lean", lean},
          {"judge_calls", judge_calls},
          {"verdicts", verdicts_json}};
}

SampleRecord SampleRecord::from_json(const nlohmann::json& j) {
  SampleRecord r;
  r.key = SampleKey::from_json(j.at("key"));
  r.solution_type = j.at("solution_type").get<std::string>();
  r.prompt_hashes = j.at("prompts").get<std::map<std::string, std::string>>();
  const auto& c = j.at("completion");
  r.completion_text = c.at("text").get<std::string>();
  r.request_digest = c.at("request_digest").get<std::string>();
  r.recorded_at = c.at("recorded_at").get<std::string>();
  r.latency_ms = c.at("latency_ms").get<long long>();
  if (!j.at("fire").is_null()) r.fire = j.at("fire");
  if (!j.at("extracted").is_null()) r.extracted = ExtractedCode::from_json(j.at("extracted"));
  if (!j.at("failure").is_null()) r.failure = j.at("failure");
  r.lean = j.at("lean");
  r.judge_calls = j.at("judge_calls").get<std::vector<std::string>>();
  for (auto v : j.at("verdicts")) {
    v["key"] = j.at("key");
    r.verdicts.push_back(Verdict::from_json(v));
  }
  return r;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << content;
    if (!out.flush()) throw Error("cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

namespace {

// Complete lines of a JSONL file; a torn final line (no newline or not
// JSON) is dropped. Returns true if anything was dropped.
bool read_complete_lines(const std::filesystem::path& path, std::vector<nlohmann::json>& out) {
  if (!std::filesystem::exists(path)) return false;
  const auto text = read_file(path);
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto nl = text.find('\n', pos);
    if (nl == std::string::npos) return true;
    const auto line = std::string_view(text).substr(pos, nl - pos);
    pos = nl + 1;
    if (line.empty()) continue;
    auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded()) {
      if (pos >= text.size()) return true;
      throw RunError("corrupt line in " + path.string());
    }
    out.push_back(std::move(j));
  }
  return false;
}

std::string to_lines(const std::vector<nlohmann::json>& items) {
  std::string out;
  for (const auto& j : items) {
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::string config_text(const nlohmann::json& config) { return config.dump(2) + "\n"; }

}  // namespace

std::unique_ptr<RunStore> RunStore::open_or_create(const std::filesystem::path& runs_dir,
                                                   const std::string& run_id,
                                                   const nlohmann::json& config) {
  std::unique_ptr<RunStore> store(new RunStore(runs_dir / run_id));
  const auto config_path = store->dir_ / "config.json";
  if (std::filesystem::exists(config_path)) {
    if (read_file(config_path) != config_text(config)) {
      throw RunError("run store " + store->dir_.string() + " holds a different config");
    }
  } else {
    std::filesystem::create_directories(store->dir_);
    write_file_atomic(config_path, config_text(config));
  }
  store->load();
  return store;
}

std::unique_ptr<RunStore> RunStore::open_existing(const std::filesystem::path& run_dir) {
  if (!std::filesystem::exists(run_dir / "config.json")) {
    throw IncompleteRun("no run store at " + run_dir.string());
  }
  std::unique_ptr<RunStore> store(new RunStore(run_dir));
  store->load();
  return store;
}

void RunStore::load() {
  config_ = nlohmann::json::parse(read_file(dir_ / "config.json"));
  std::vector<nlohmann::json> raw_records;
  bool dirty = read_complete_lines(dir_ / "records.jsonl", raw_records);
  for (const auto& j : raw_records) {
    auto r = SampleRecord::from_json(j);
    if (!keys_.insert(r.key.str()).second) throw RunError("duplicate record " + r.key.str());
    records_.push_back(std::move(r));
  }
  if (dirty) write_file_atomic(dir_ / "records.jsonl", to_lines(raw_records));

  // Verdicts and prompts of samples that never committed are dropped.
  std::vector<nlohmann::json> verdicts;
  bool verdicts_dirty = read_complete_lines(dir_ / "verdicts.jsonl", verdicts);
  std::vector<nlohmann::json> kept_verdicts;
  for (auto& v : verdicts) {
    if (keys_.contains(SampleKey::from_json(v.at("key")).str())) kept_verdicts.push_back(std::move(v));
  }
  if (verdicts_dirty || kept_verdicts.size() != verdicts.size()) {
    write_file_atomic(dir_ / "verdicts.jsonl", to_lines(kept_verdicts));
  }

  std::set<std::string> referenced;
  for (const auto& r : records_) {
    for (const auto& [_, h] : r.prompt_hashes) referenced.insert(h);
  }
  std::vector<nlohmann::json> prompts;
  bool prompts_dirty = read_complete_lines(dir_ / "prompts.jsonl", prompts);
  std::vector<nlohmann::json> kept_prompts;
  for (auto& p : prompts) {
    const auto h = p.at("content_hash").get<std::string>();
    if (referenced.contains(h) && prompt_hashes_.insert(h).second) kept_prompts.push_back(std::move(p));
  }
  if (prompts_dirty || kept_prompts.size() != prompts.size()) {
    write_file_atomic(dir_ / "prompts.jsonl", to_lines(kept_prompts));
  }
}

void RunStore::commit(const SampleRecord& record, const std::vector<PromptBundle>& prompts) {
  std::lock_guard lock(mu_);
  const auto key = record.key.str();
  if (keys_.contains(key)) throw RunError("sample " + key + " is already stored");
  for (const auto& p : prompts) {
    if (prompt_hashes_.insert(p.content_hash).second) append_jsonl(dir_ / "prompts.jsonl", p.to_json());
  }
  for (auto v : record.verdicts) {
    v.key = record.key;
    append_jsonl(dir_ / "verdicts.jsonl", v.to_json());
  }
  append_jsonl(dir_ / "records.jsonl", record.to_json());
  keys_.insert(key);
  records_.push_back(record);
}

std::vector<nlohmann::json> RunStore::prompts() const {
  std::vector<nlohmann::json> out;
  read_complete_lines(dir_ / "prompts.jsonl", out);
  return out;
}

}  // namespace conjbench
