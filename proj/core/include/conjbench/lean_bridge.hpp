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

#include <chrono>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "conjbench/dataset.hpp"

namespace conjbench {

struct ExtractedCode {
  std::vector<std::string> blocks;  // contents of ```lean fences, in order
  std::string chosen;
  std::string raw;
  bool fallback = false;  // no lean fence: chosen is the de-fenced raw text

  nlohmann::json to_json() const;
  static ExtractedCode from_json(const nlohmann::json& j);
};

// Collects every ```lean (or ```lean4) fence; a trailing unterminated fence
// runs to the end of the text. The last block is chosen. Without any lean
// fence the whole text is used, minus the marker lines of other fences.
ExtractedCode extract_code(std::string_view completion);

enum class LeanJobKind { Typecheck, EquivRfl };

std::string_view to_string(LeanJobKind k);

inline constexpr std::chrono::seconds kTypecheckTimeout{300};
inline constexpr std::chrono::seconds kEquivRflTimeout{60};

struct LeanJob {
  std::string job_id;  // digest of kind and source
  std::string source;
  LeanJobKind kind = LeanJobKind::Typecheck;
  std::chrono::milliseconds timeout{kTypecheckTimeout};
};

LeanJob make_job(LeanJobKind kind, std::string source);

// Moves leading `import` lines of `code` into `header` (skipping ones the
// header already has). Lean rejects imports after the first command.
struct SplitImports {
  std::string header;
  std::string body;
};
SplitImports hoist_imports(std::string_view header, std::string_view code);

inline constexpr std::string_view kModelConjectureName = "conjecture_model";

// Seen: header, gold conjecture, generated code. A `conjecture` declared by
// the generated code is renamed to `conjecture_model` throughout it.
// Unseen: header and generated code only. Throws PreconditionError when the
// generated text is blank.
LeanJob build_typecheck_job(const ProblemInstance& instance, std::string_view generated,
                            Setting setting);

inline constexpr std::string_view kGoldName = "conjecture_gold";
inline constexpr std::string_view kGeneratedName = "conjecture_generated";

// Header, both declarations renamed, then
// `theorem thm : conjecture_gold = conjecture_generated := by rfl`.
// Throws PreconditionError unless each input holds exactly one top-level
// declaration (abbrev or def).
LeanJob build_equiv_rfl_job(std::string_view gold_conjecture, std::string_view generated_conjecture,
                            std::string_view header);

enum class LeanStatus { Success, CompileError, Timeout, ToolFailure };

std::string_view to_string(LeanStatus s);
std::optional<LeanStatus> parse_lean_status(std::string_view s);

struct LeanMessage {
  std::string severity;  // error, warning, info
  std::string text;
  int line = 0;  // 0 when the message carries no position
  int column = 0;

  bool operator==(const LeanMessage&) const = default;
};

struct LeanOutcome {
  LeanStatus status = LeanStatus::ToolFailure;
  std::vector<LeanMessage> messages;
  std::chrono::milliseconds wall_time{0};

  bool has_error() const;
  // Compact rendering of the error messages, used as verdict evidence.
  std::string summary() const;

  nlohmann::json to_json() const;
  static LeanOutcome from_json(const nlohmann::json& j);
};

// Parses `file:line:col: severity: message` diagnostics; continuation lines
// belong to the preceding message. Position-less `error: ...` lines are
// kept with line 0.
std::vector<LeanMessage> parse_diagnostics(std::string_view output);

// Maps a finished compiler process to an outcome.
LeanOutcome classify_outcome(int exit_code, bool killed_by_signal, bool timed_out,
                             bool spawn_failed, std::string_view output,
                             std::chrono::milliseconds wall_time);

// Anything that can check a job. Implementations must be thread-safe.
class LeanRunner {
 public:
  virtual ~LeanRunner() = default;
  // A broken toolchain yields status ToolFailure rather than an exception;
  // a replay source without the job throws ToolFailure.
  virtual LeanOutcome run(const LeanJob& job) = 0;
};

}  // namespace conjbench
