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

#include "conjbench/dataset.hpp"

#include <fstream>
#include <sstream>
#include <unordered_set>

#include "conjbench/error.hpp"
#include "conjbench/lean_text.hpp"

namespace conjbench {

std::string_view to_string(Source s) {
  return s == Source::PutnamBench ? "PutnamBench" : "CombiBench";
}

std::string_view to_string(SolutionType t) {
  switch (t) {
    case SolutionType::Numerical:
      return "Numerical";
    case SolutionType::Algebraic:
      return "Algebraic";
    case SolutionType::Proof:
      return "Proof";
  }
  return "?";
}

std::string_view to_string(Setting s) { return s == Setting::Seen ? "Seen" : "Unseen"; }

std::optional<Source> parse_source(std::string_view s) {
  if (s == "PutnamBench") return Source::PutnamBench;
  if (s == "CombiBench") return Source::CombiBench;
  return std::nullopt;
}

std::optional<SolutionType> parse_solution_type(std::string_view s) {
  if (s == "Numerical") return SolutionType::Numerical;
  if (s == "Algebraic") return SolutionType::Algebraic;
  if (s == "Proof") return SolutionType::Proof;
  return std::nullopt;
}

std::optional<Setting> parse_setting(std::string_view s) {
  if (s == "Seen" || s == "seen") return Setting::Seen;
  if (s == "Unseen" || s == "unseen") return Setting::Unseen;
  return std::nullopt;
}

void validate_instance(const ProblemInstance& instance) {
  if (instance.id.empty()) throw DatasetError("empty id");
  const auto where = " (" + instance.id + ")";
  if (instance.informal_statement.empty()) throw DatasetError("empty informal_statement" + where);
  if (!lean::contains_identifier(instance.gold_formal_statement, "conjecture")) {
    throw DatasetError("gold_formal_statement does not reference `conjecture`" + where);
  }
  const auto decls = lean::top_level_declarations(instance.gold_conjecture);
  if (decls.size() != 1) {
    throw DatasetError("gold_conjecture must declare exactly one identifier, found " +
                       std::to_string(decls.size()) + where);
  }
  if (decls.front().name != "conjecture") {
    throw DatasetError("gold_conjecture declares `" + decls.front().name +
                       "` instead of `conjecture`" + where);
  }
  if (instance.solution_type == SolutionType::Proof) {
    const auto type = lean::type_ascription(instance.gold_conjecture);
    if (!type || *type != "Prop") {
      throw DatasetError("Proof-type gold_conjecture must have type Prop" + where);
    }
  }
}

nlohmann::json to_json(const ProblemInstance& instance) {
  return {
      {"id", instance.id},
      {"source", to_string(instance.source)},
      {"informal_statement", instance.informal_statement},
      {"gold_conjecture", instance.gold_conjecture},
      {"gold_formal_statement", instance.gold_formal_statement},
      {"solution_type", to_string(instance.solution_type)},
      {"environment_header", instance.environment_header},
  };
}

namespace {

std::string required_string(const nlohmann::json& record, const char* key) {
  const auto it = record.find(key);
  if (it == record.end() || !it->is_string()) {
    throw DatasetError(std::string("missing or non-string field `") + key + "`");
  }
  return it->get<std::string>();
}

}  // namespace

ProblemInstance instance_from_json(const nlohmann::json& record) {
  if (!record.is_object()) throw DatasetError("record is not an object");
  ProblemInstance inst;
  inst.id = required_string(record, "id");
  const auto source = required_string(record, "source");
  const auto src = parse_source(source);
  if (!src) throw DatasetError("unknown source `" + source + "`");
  inst.source = *src;
  inst.informal_statement = required_string(record, "informal_statement");
  inst.gold_conjecture = required_string(record, "gold_conjecture");
  inst.gold_formal_statement = required_string(record, "gold_formal_statement");
  const auto type_name = required_string(record, "solution_type");
  const auto type = parse_solution_type(type_name);
  if (!type) throw DatasetError("unknown solution_type `" + type_name + "`");
  inst.solution_type = *type;
  if (const auto it = record.find("environment_header"); it != record.end()) {
    if (!it->is_string()) throw DatasetError("non-string field `environment_header`");
    inst.environment_header = it->get<std::string>();
  }
  validate_instance(inst);
  return inst;
}

std::size_t DatasetManifest::count(SolutionType t) const {
  const auto it = type_counts.find(t);
  return it == type_counts.end() ? 0 : it->second;
}

const ProblemInstance* Dataset::find(std::string_view id) const {
  for (const auto& inst : instances) {
    if (inst.id == id) return &inst;
  }
  return nullptr;
}

DatasetManifest compute_manifest(std::string name, const std::vector<ProblemInstance>& instances) {
  DatasetManifest m;
  m.name = std::move(name);
  m.schema_version = std::string(kSchemaVersion);
  for (auto t : {SolutionType::Numerical, SolutionType::Algebraic, SolutionType::Proof}) {
    m.type_counts[t] = 0;
  }
  for (const auto& inst : instances) ++m.type_counts[inst.solution_type];
  m.problem_count = instances.size();
  return m;
}

Dataset parse_dataset(std::string_view text, std::string name) {
  Dataset ds;
  std::unordered_set<std::string> seen_ids;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    const auto line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    ProblemInstance inst;
    try {
      inst = instance_from_json(nlohmann::json::parse(line));
    } catch (const nlohmann::json::exception& e) {
      throw DatasetError(std::string("malformed record: ") + e.what(), line_no);
    } catch (const DatasetError& e) {
      throw DatasetError(e.what(), line_no);
    }
    if (!seen_ids.insert(inst.id).second) {
      throw DatasetError("duplicate id `" + inst.id + "`", line_no);
    }
    ds.instances.push_back(std::move(inst));
  }
  ds.manifest = compute_manifest(std::move(name), ds.instances);
  return ds;
}

Dataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DatasetError("cannot open dataset " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_dataset(buf.str(), path.stem().string());
}

std::string serialize_dataset(const std::vector<ProblemInstance>& instances) {
  std::string out;
  for (const auto& inst : instances) {
    out += to_json(inst).dump();
    out += '\n';
  }
  return out;
}

void save_dataset(const std::vector<ProblemInstance>& instances, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DatasetError("cannot write dataset " + path.string());
  out << serialize_dataset(instances);
}

bool InstanceFilter::matches(const ProblemInstance& instance) const {
  if (solution_type && instance.solution_type != *solution_type) return false;
  if (source && instance.source != *source) return false;
  if (ids && !ids->contains(instance.id)) return false;
  return true;
}

std::vector<ProblemInstance> filter_instances(const std::vector<ProblemInstance>& instances,
                                              const InstanceFilter& filter) {
  std::vector<ProblemInstance> out;
  for (const auto& inst : instances) {
    if (filter.matches(inst)) out.push_back(inst);
  }
  return out;
}

TaskInput strip_conjecture_for_setting(const ProblemInstance& instance, Setting setting) {
  TaskInput input;
  input.informal_statement = instance.informal_statement;
  input.environment_header = instance.environment_header;
  if (setting == Setting::Seen) input.conjecture_block = instance.gold_conjecture;
  return input;
}

}  // namespace conjbench
