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

#include "conjbench/prompts.hpp"

#include <algorithm>
#include <array>

#include "conjbench/digest.hpp"
#include "conjbench/error.hpp"
#include "conjbench/lean_text.hpp"
#include "conjbench/resources.hpp"

namespace conjbench {
namespace {

struct NameEntry {
  TemplateName name;
  std::string_view text;
};

constexpr std::array kNames = {
    NameEntry{TemplateName::CotGen, "cot_gen"},
    NameEntry{TemplateName::LotGen, "lot_gen"},
    NameEntry{TemplateName::Autoformalise, "autoformalise"},
    NameEntry{TemplateName::StandaloneConjecture, "standalone_conjecture"},
    NameEntry{TemplateName::ConJudge, "conjudge"},
    NameEntry{TemplateName::GraderBackTranslate, "grader_back_translate"},
    NameEntry{TemplateName::GraderCompare, "grader_compare"},
};

std::string_view strip_final_newline(std::string_view s) {
  if (!s.empty() && s.back() == '\n') s.remove_suffix(1);
  return s;
}

// Parses the "@@ field" sectioned exemplar files.
SeedExemplar parse_exemplar(std::string_view text) {
  std::map<std::string, std::string> sections;
  std::string current;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    const auto line = text.substr(pos, nl - pos);
    pos = nl + 1;
    if (line.starts_with("@@ ")) {
      current = std::string(line.substr(3));
      sections[current];
      continue;
    }
    auto& body = sections[current];
    if (!body.empty() || !line.empty()) {
      if (!body.empty()) body += '\n';
      body += line;
    }
  }
  for (auto& [key, value] : sections) {
    while (!value.empty() && value.back() == '\n') value.pop_back();
  }
  return {sections["id"],  sections["informal_statement"], sections["cot"],
          sections["lot"], sections["combined"],           sections["conjecture"],
          sections["formal_statement"]};
}

}  // namespace

std::string_view to_string(TemplateName name) {
  for (const auto& e : kNames) {
    if (e.name == name) return e.text;
  }
  return "?";
}

std::optional<TemplateName> parse_template_name(std::string_view s) {
  for (const auto& e : kNames) {
    if (e.text == s) return e.name;
  }
  return std::nullopt;
}

std::string TemplateId::describe() const {
  std::string out(to_string(name));
  std::vector<std::string_view> flags;
  if (seen) flags.push_back("seen");
  if (few_shot) flags.push_back("few_shot");
  if (hints) flags.push_back("hints");
  out += '[';
  for (std::size_t i = 0; i < flags.size(); ++i) {
    if (i) out += ',';
    out += flags[i];
  }
  out += ']';
  return out;
}

void validate_template_id(const TemplateId& id) {
  switch (id.name) {
    case TemplateName::Autoformalise:
      return;
    case TemplateName::CotGen:
    case TemplateName::LotGen:
      if (id.seen || id.hints) {
        throw TemplateError(id.describe() + ": only the few_shot flag applies");
      }
      return;
    default:
      if (id.seen || id.few_shot || id.hints) {
        throw TemplateError(id.describe() + ": template admits no variant flags");
      }
  }
}

const std::vector<SeedExemplar>& seed_exemplars() {
  static const std::vector<SeedExemplar> seeds = [] {
    std::vector<SeedExemplar> out;
    // Resource paths sort by their numeric prefix, which is the fixed order.
    for (const auto& e : resources::all()) {
      if (e.path.starts_with("exemplars/")) out.push_back(parse_exemplar(e.content));
    }
    return out;
  }();
  return seeds;
}

bool is_seed_id(std::string_view id) {
  const auto& seeds = seed_exemplars();
  return std::any_of(seeds.begin(), seeds.end(), [&](const auto& s) { return s.id == id; });
}

std::string_view template_text(TemplateName name, bool system) {
  const auto path = "templates/" + std::string(to_string(name)) + (system ? ".system.txt" : ".user.txt");
  const auto text = resources::find(path);
  if (!text) throw TemplateError("template resource missing: " + path);
  return strip_final_newline(*text);
}

nlohmann::json PromptBundle::to_json() const {
  auto regions_json = nlohmann::json::array();
  for (const auto& r : regions) {
    regions_json.push_back({{"begin", r.begin},
                            {"end", r.end},
                            {"origin", r.origin == RegionOrigin::Variable ? "variable" : "list_item"},
                            {"name", r.name}});
  }
  return {{"template", template_id.describe()},
          {"system", system_message},
          {"user", user_message},
          {"exemplar_ids", exemplar_ids},
          {"content_hash", content_hash},
          {"regions", regions_json}};
}

PromptBundle render(const TemplateId& id, const PromptVariables& variables,
                    std::span<const SeedExemplar> exemplars) {
  validate_template_id(id);
  const auto user_src = template_text(id.name, false);
  const bool has_loop = loop_lists(user_src).contains("examples");
  if (!exemplars.empty() && !has_loop) {
    throw TemplateError(id.describe() + ": template takes no exemplars");
  }
  if (!exemplars.empty() && !id.few_shot) {
    throw TemplateError(id.describe() + ": exemplars supplied without few_shot");
  }
  if (id.few_shot && exemplars.empty()) {
    throw TemplateError(id.describe() + ": few_shot requires exemplars");
  }

  TemplateContext ctx;
  ctx.variables = variables;
  ctx.flags = {{"seen", id.seen}, {"few_shot", id.few_shot}, {"hints", id.hints}};
  auto& items = ctx.lists["examples"];
  PromptBundle bundle;
  for (const auto& ex : exemplars) {
    items.push_back({{"id", ex.id},
                     {"name", ex.id},
                     {"informal_statement", ex.informal_statement},
                     {"cot", ex.cot},
                     {"lot", ex.lot},
                     {"combined", ex.combined},
                     {"conjecture", ex.conjecture},
                     {"formal_statement", ex.formal_statement}});
    bundle.exemplar_ids.push_back(ex.id);
  }

  const TemplateContext system_ctx{variables, ctx.flags, {}};
  bundle.system_message = render_template(template_text(id.name, true), system_ctx).text;
  auto user = render_template(user_src, ctx);
  bundle.user_message = std::move(user.text);
  bundle.regions = std::move(user.regions);
  bundle.template_id = id;
  bundle.content_hash = json_digest({{"template", id.describe()},
                                     {"system", bundle.system_message},
                                     {"user", bundle.user_message}});
  return bundle;
}

namespace {

std::vector<std::string_view> split_lines(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    auto nl = s.find('\n', pos);
    if (nl == std::string_view::npos) nl = s.size();
    auto line = s.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    out.push_back(line);
    pos = nl + 1;
  }
  return out;
}

bool is_blank_line(std::string_view line) {
  return line.find_first_not_of(" \t") == std::string_view::npos;
}

std::string_view lstrip(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  return b == std::string_view::npos ? std::string_view{} : s.substr(b);
}

// "Lean:" or "- Lean:" after indentation.
std::optional<std::string_view> lean_snippet_start(std::string_view line) {
  auto rest = lstrip(line);
  if (rest.starts_with("- ")) rest = lstrip(rest.substr(2));
  if (rest.starts_with("Lean:")) return rest;
  return std::nullopt;
}

}  // namespace

std::vector<std::string> parse_cot_steps(std::string_view cot) {
  std::vector<std::string> steps;
  for (const auto line : split_lines(cot)) {
    if (line.starts_with("- ")) {
      steps.emplace_back(line);
      continue;
    }
    if (steps.empty() || is_blank_line(line)) continue;
    steps.back() += '\n';
    steps.back() += line;
  }
  return steps;
}

std::vector<std::string> parse_lot_snippets(std::string_view lot) {
  std::vector<std::string> snippets;
  for (const auto line : split_lines(lot)) {
    if (const auto start = lean_snippet_start(line)) {
      snippets.emplace_back(*start);
      continue;
    }
    if (snippets.empty() || is_blank_line(line)) continue;
    snippets.back() += '\n';
    snippets.back() += line;
  }
  return snippets;
}

std::string assemble_combined_hints(std::string_view cot, std::string_view lot) {
  const auto steps = parse_cot_steps(cot);
  if (steps.empty()) throw PreconditionError("chain-of-thought has no \"- \" steps");
  const auto snippets = parse_lot_snippets(lot);
  if (snippets.size() > steps.size()) {
    throw PreconditionError("Lean-of-thought has " + std::to_string(snippets.size()) +
                            " snippets for " + std::to_string(steps.size()) + " steps");
  }
  std::string out;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (i) out += "\n\n";
    out += steps[i];
    if (i >= snippets.size()) continue;
    for (const auto line : split_lines(snippets[i])) {
      out += "\n  ";
      out += line;
    }
  }
  return out;
}

}  // namespace conjbench
