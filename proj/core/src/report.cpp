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

#include "conjbench/report.hpp"

#include <sstream>

#include "conjbench/error.hpp"

namespace conjbench {

namespace {

struct CellId {
  std::string model, method, setting;
  auto operator<=>(const CellId&) const = default;
};

std::string type_name(const std::optional<SolutionType>& t) {
  return t ? std::string(to_string(*t)) : "All";
}

const std::map<int, PassAtK>* find_values(const std::vector<ReportRow>& rows, const ReportRow& like,
                                          std::string_view setting, Metric m) {
  for (const auto& r : rows) {
    if (r.model == like.model && r.method == like.method && r.setting == setting &&
        r.solution_type == like.solution_type) {
      const auto it = r.values.find(m);
      return it == r.values.end() ? nullptr : &it->second;
    }
  }
  return nullptr;
}

}  // namespace

RunReport build_report(const RunStore& store) {
  const auto& cfg = store.config();
  RunReport report;
  report.run_id = cfg.at("run_id").get<std::string>();
  report.identity = cfg.at("identity");
  const int k = report.identity.at("k").get<int>();
  report.ks = k == 1 ? std::vector<int>{1} : std::vector<int>{1, k};
  for (const auto& m : report.identity.at("metrics")) {
    const auto metric = parse_metric(m.get<std::string>());
    if (!metric) throw RunError("unknown metric in run config: " + m.dump());
    report.metrics.push_back(*metric);
  }
  const auto mode = parse_pass_mode(report.identity.at("pass_mode").get<std::string>()).value();

  std::vector<std::string> instance_order;
  for (const auto& inst : cfg.at("instances")) instance_order.push_back(inst.at("id").get<std::string>());
  report.instance_count = instance_order.size();

  // cell -> instance -> per-seed verdicts by metric
  std::map<CellId, std::map<std::string, std::vector<const SampleRecord*>>> grid;
  for (const auto& r : store.records()) {
    grid[{r.key.model, r.key.method, r.key.setting}][r.key.instance_id].push_back(&r);
  }

  for (const auto& cell : cfg.at("cells")) {
    const CellId id{cell.at("model").get<std::string>(), cell.at("method").get<std::string>(),
                    cell.at("setting").get<std::string>()};
    const auto cell_label = id.model + "/" + id.method + "/" + id.setting;
    auto& by_instance = grid[id];
    CellTally tally{id.model, id.method, id.setting, 0, 0, {}, {}};

    std::map<Metric, std::vector<InstanceVerdicts>> matrix;
    for (const auto& inst_id : instance_order) {
      auto samples = by_instance[inst_id];
      if (samples.size() != static_cast<std::size_t>(k)) {
        throw IncompleteRun("cell " + cell_label + " has " + std::to_string(samples.size()) +
                            " of " + std::to_string(k) + " samples for " + inst_id);
      }
      std::sort(samples.begin(), samples.end(), [](const SampleRecord* a, const SampleRecord* b) {
        return a->key.seed_index < b->key.seed_index;
      });
      for (int i = 0; i < k; ++i) {
        if (samples[static_cast<std::size_t>(i)]->key.seed_index != i) {
          throw IncompleteRun("cell " + cell_label + " misses seed index " + std::to_string(i) + " of " + inst_id);
        }
      }
      const auto type = parse_solution_type(samples.front()->solution_type);
      if (!type) throw RunError("record of " + inst_id + " has no valid solution type");
      for (const auto metric : report.metrics) {
        InstanceVerdicts iv{inst_id, *type, {}, 0, 0, 0};
        for (const auto* s : samples) {
          const auto it = std::find_if(s->verdicts.begin(), s->verdicts.end(),
                                       [&](const Verdict& v) { return v.metric == metric; });
          if (it == s->verdicts.end()) {
            throw IncompleteRun("sample " + s->key.str() + " lacks a " + std::string(to_string(metric)) +
                                " verdict");
          }
          iv.values.push_back(it->value);
          if (it->status == VerdictStatus::ParseFailure) ++iv.parse_failures;
          if (it->status == VerdictStatus::Skipped) ++iv.skipped;
          if (it->status == VerdictStatus::NotRun) ++iv.not_run;
        }
        tally.parse_failures[metric] += iv.parse_failures;
        tally.skipped[metric] += iv.skipped;
        matrix[metric].push_back(std::move(iv));
      }
      for (const auto* s : samples) {
        ++tally.samples;
        if (s->failure) ++tally.stage_failures;
      }
    }

    std::vector<std::optional<SolutionType>> types = {std::nullopt, SolutionType::Numerical,
                                                      SolutionType::Algebraic, SolutionType::Proof};
    for (const auto& t : types) {
      ReportRow row{id.model, id.method, id.setting, t, {}, {}};
      for (const auto metric : report.metrics) {
        for (const int kk : report.ks) {
          row.values[metric][kk] =
              aggregate_pass_at_k(matrix[metric], metric, kk, {id.method, id.setting, t}, mode);
        }
      }
      report.rows.push_back(std::move(row));
    }
    report.tallies.push_back(std::move(tally));
  }

  for (auto& row : report.rows) {
    if (row.setting != "unseen") continue;
    for (const auto metric : report.metrics) {
      const auto* seen = find_values(report.rows, row, "seen", metric);
      if (!seen) continue;
      for (const int kk : report.ks) {
        const auto& u = row.values[metric][kk];
        const auto& s = seen->at(kk);
        if (u.not_run || s.not_run) continue;
        row.delta[metric][kk] = u.hundredths() - s.hundredths();
      }
    }
  }
  return report;
}

nlohmann::json RunReport::to_json() const {
  auto rows_json = nlohmann::json::array();
  for (const auto& r : rows) {
    auto values = nlohmann::json::array();
    for (const auto& [metric, by_k] : r.values) {
      for (const auto& [k, p] : by_k) {
        auto v = p.to_json();
        v["model"] = r.model;
        const auto d = r.delta.find(metric);
        if (d != r.delta.end() && d->second.contains(k)) {
          v["delta_vs_seen"] = format_hundredths(d->second.at(k), true);
        }
        values.push_back(std::move(v));
      }
    }
    rows_json.push_back({{"model", r.model},
                         {"method", r.method},
                         {"setting", r.setting},
                         {"solution_type", type_name(r.solution_type)},
                         {"values", values}});
  }
  auto tallies_json = nlohmann::json::array();
  for (const auto& t : tallies) {
    nlohmann::json pf = nlohmann::json::object(), sk = nlohmann::json::object();
    for (const auto& [m, n] : t.parse_failures) pf[std::string(to_string(m))] = n;
    for (const auto& [m, n] : t.skipped) sk[std::string(to_string(m))] = n;
    tallies_json.push_back({{"model", t.model},
                            {"method", t.method},
                            {"setting", t.setting},
                            {"samples", t.samples},
                            {"stage_failures", t.stage_failures},
                            {"parse_failures", pf},
                            {"skipped", sk}});
  }
  return {{"run_id", run_id},   {"config", identity}, {"instances", instance_count},
          {"ks", ks},           {"rows", rows_json},  {"tallies", tallies_json}};
}

std::string RunReport::render_tsv() const {
  std::ostringstream os;
  os << "model\tmethod\tsetting\tsolution_type\tmetric\tk\tnumerator\tdenominator\trate\tdisplay\t"
        "delta_vs_seen\tparse_failures\tskipped\n";
  for (const auto& r : rows) {
    for (const auto metric : metrics) {
      for (const int k : ks) {
        const auto& p = r.values.at(metric).at(k);
        std::string delta;
        const auto d = r.delta.find(metric);
        if (d != r.delta.end() && d->second.contains(k)) delta = format_hundredths(d->second.at(k), true);
        std::ostringstream rate;
        rate.precision(17);
        rate << p.rate;
        os << r.model << '\t' << r.method << '\t' << r.setting << '\t' << type_name(r.solution_type) << '\t'
           << to_string(metric) << '\t' << k << '\t' << p.numerator << '\t' << p.denominator << '\t'
           << rate.str() << '\t' << p.display() << '\t' << delta << '\t' << p.parse_failures << '\t'
           << p.skipped << '\n';
      }
    }
  }
  return os.str();
}

namespace {

std::string render_table(const std::vector<std::vector<std::string>>& table) {
  std::vector<std::size_t> width;
  for (const auto& row : table) {
    if (width.size() < row.size()) width.resize(row.size(), 0);
    for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
  }
  std::ostringstream os;
  for (const auto& row : table) {
    std::string line;
    for (std::size_t i = 0; i < row.size(); ++i) {
      line += row[i];
      if (i + 1 < row.size()) line += std::string(width[i] - row[i].size() + 2, ' ');
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    os << line << '\n';
  }
  return os.str();
}

}  // namespace

std::string RunReport::render_text() const {
  std::ostringstream os;
  os << "run " << run_id << "  task " << identity.at("task").get<std::string>() << "  instances "
     << instance_count << "  pass@k " << identity.at("pass_mode").get<std::string>() << "\n";

  std::vector<std::string> header = {"model", "method", "setting", "type"};
  for (const auto metric : metrics) {
    for (const int k : ks) header.push_back(std::string(to_string(metric)) + "@" + std::to_string(k));
  }
  for (const bool by_type : {false, true}) {
    os << "\n" << (by_type ? "By solution type" : "All instances") << "\n";
    std::vector<std::vector<std::string>> table = {header};
    for (const auto& r : rows) {
      if (r.solution_type.has_value() != by_type) continue;
      std::vector<std::string> line = {r.model, r.method, r.setting, type_name(r.solution_type)};
      for (const auto metric : metrics) {
        for (const int k : ks) {
          std::string cell = r.values.at(metric).at(k).display();
          const auto d = r.delta.find(metric);
          if (d != r.delta.end() && d->second.contains(k)) {
            cell += " (" + format_hundredths(d->second.at(k), true) + ")";
          }
          line.push_back(std::move(cell));
        }
      }
      table.push_back(std::move(line));
    }
    os << render_table(table);
  }

  os << "\nTallies\n";
  std::vector<std::vector<std::string>> table = {{"model", "method", "setting", "samples", "stage_failures"}};
  for (const auto metric : metrics) table.front().push_back(std::string(to_string(metric)) + "_parse_failures");
  for (const auto metric : metrics) table.front().push_back(std::string(to_string(metric)) + "_skipped");
  for (const auto& t : tallies) {
    std::vector<std::string> line = {t.model, t.method, t.setting, std::to_string(t.samples),
                                     std::to_string(t.stage_failures)};
    for (const auto metric : metrics) {
      const auto it = t.parse_failures.find(metric);
      line.push_back(std::to_string(it == t.parse_failures.end() ? 0 : it->second));
    }
    for (const auto metric : metrics) {
      const auto it = t.skipped.find(metric);
      line.push_back(std::to_string(it == t.skipped.end() ? 0 : it->second));
    }
    table.push_back(std::move(line));
  }
  os << render_table(table);
  return os.str();
}

void write_report(const RunStore& store, const RunReport& report) {
  const auto dir = store.reports_dir();
  write_file_atomic(dir / "report.json", report.to_json().dump(2) + "\n");
  write_file_atomic(dir / "report.tsv", report.render_tsv());
  write_file_atomic(dir / "report.txt", report.render_text());
}

}  // namespace conjbench
