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

#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "conjbench/template_engine.hpp"

namespace conjbench {

enum class TemplateName {
  CotGen,
  LotGen,
  Autoformalise,
  StandaloneConjecture,
  ConJudge,
  GraderBackTranslate,
  GraderCompare,
};

std::string_view to_string(TemplateName name);
std::optional<TemplateName> parse_template_name(std::string_view s);

struct TemplateId {
  TemplateName name = TemplateName::Autoformalise;
  bool seen = false;
  bool few_shot = false;
  bool hints = false;

  // e.g. "autoformalise[seen,few_shot,hints]"; stable, used in hashes.
  std::string describe() const;
  bool operator==(const TemplateId&) const = default;
};

// Throws TemplateError if the flag combination is not admitted by the
// template (e.g. any flag on StandaloneConjecture, hints on CotGen).
void validate_template_id(const TemplateId& id);

struct SeedExemplar {
  std::string id;
  std::string informal_statement;
  std::string cot;
  std::string lot;
  // Interleaved "- step / Lean: snippet" form as annotated.
  std::string combined;
  std::string conjecture;
  std::string formal_statement;
};

// The five annotated seed problems, in their fixed presentation order.
const std::vector<SeedExemplar>& seed_exemplars();
bool is_seed_id(std::string_view id);

// Raw template text as shipped (system or user part).
std::string_view template_text(TemplateName name, bool system);

struct PromptBundle {
  std::string system_message;
  std::string user_message;
  TemplateId template_id;
  std::vector<std::string> exemplar_ids;
  std::string content_hash;
  // Substituted spans of user_message, used by leak scans.
  std::vector<Region> regions;

  nlohmann::json to_json() const;
};

using PromptVariables = std::map<std::string, std::string>;

// Renders one prompt. Exemplars must be supplied exactly when
// `id.few_shot` is set, and are expanded in the given order.
PromptBundle render(const TemplateId& id, const PromptVariables& variables,
                    std::span<const SeedExemplar> exemplars = {});

// Splits chain-of-thought text into steps: each step starts at a line
// beginning "- " and runs until the next one; blank lines and any preamble
// before the first step are dropped.
std::vector<std::string> parse_cot_steps(std::string_view cot);

// Splits Lean-of-thought text into snippets, each starting at a line whose
// first non-blank text is "Lean:" (optionally after "- ").
std::vector<std::string> parse_lot_snippets(std::string_view lot);

// Interleaves CoT steps with their Lean snippets: each step is followed by
// its snippet indented two spaces; steps without a snippet pass through.
// Blocks are separated by a blank line. Throws PreconditionError when the
// CoT has no steps or the LoT has more snippets than the CoT has steps.
std::string assemble_combined_hints(std::string_view cot, std::string_view lot);

}  // namespace conjbench
