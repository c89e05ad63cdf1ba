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

#include "conjbench/lean_bridge.hpp"

#include <regex>
#include <sstream>

#include "conjbench/digest.hpp"
#include "conjbench/error.hpp"
#include "conjbench/lean_text.hpp"

namespace conjbench {

namespace {

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) {
      if (pos < text.size()) lines.push_back(text.substr(pos));
      break;
    }
    lines.push_back(text.substr(pos, nl - pos));
    pos = nl + 1;
  }
  return lines;
}

std::string_view strip_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

// Returns the info string when `line` opens or closes a fence.
std::optional<std::string> fence_info(std::string_view line) {
  line = strip_cr(line);
  std::size_t i = 0;
  while (i < line.size() && i < 3 && line[i] == ' ') ++i;
  if (line.substr(i, 3) != "```") return std::nullopt;
  return lean::trim(line.substr(i + 3));
}

bool is_lean_info(const std::string& info) {
  const auto word = info.substr(0, info.find_first_of(" \t{"));
  return word == "lean" || word == "lean4" || word == "Lean" || word == "Lean4";
}

std::string join(const std::vector<std::string_view>& lines) {
  std::string out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (i) out += '\n';
    out += strip_cr(lines[i]);
  }
  return out;
}

}  // namespace

ExtractedCode extract_code(std::string_view completion) {
  ExtractedCode out;
  out.raw = std::string(completion);
  const auto lines = split_lines(completion);
  std::vector<std::string_view> plain;
  std::vector<std::string_view> current;
  enum { Outside, InLean, InOther } state = Outside;
  for (const auto line : lines) {
    const auto info = fence_info(line);
    switch (state) {
      case Outside:
        if (info) {
          state = is_lean_info(*info) ? InLean : InOther;
          current.clear();
        } else {
          plain.push_back(line);
        }
        break;
      case InLean:
        if (info && info->empty()) {
          out.blocks.push_back(join(current));
          state = Outside;
        } else {
          current.push_back(line);
        }
        break;
      case InOther:
        if (info && info->empty()) {
          state = Outside;
        } else {
          plain.push_back(line);
        }
        break;
    }
  }
  if (state == InLean) out.blocks.push_back(join(current));
  if (!out.blocks.empty()) {
    out.chosen = lean::trim(out.blocks.back());
  } else {
    out.fallback = true;
    out.chosen = lean::trim(join(plain));
  }
  return out;
}

nlohmann::json ExtractedCode::to_json() const {
  return {{"blocks", blocks}, {"chosen", chosen}, {"fallback", fallback}};
}

ExtractedCode ExtractedCode::from_json(const nlohmann::json& j) {
  ExtractedCode c;
  c.blocks = j.at("blocks").get<std::vector<std::string>>();
  c.chosen = j.at("chosen").get<std::string>();
  c.fallback = j.value("fallback", false);
  return c;
}

std::string_view to_string(LeanJobKind k) {
  return k == LeanJobKind::Typecheck ? "typecheck" : "equiv_rfl";
}

LeanJob make_job(LeanJobKind kind, std::string source) {
  LeanJob job;
  job.kind = kind;
  job.timeout = kind == LeanJobKind::Typecheck ? std::chrono::milliseconds(kTypecheckTimeout)
                                               : std::chrono::milliseconds(kEquivRflTimeout);
  job.job_id = sha256_hex(std::string(to_string(kind)) + '\n' + source);
  job.source = std::move(source);
  return job;
}

SplitImports hoist_imports(std::string_view header, std::string_view code) {
  SplitImports out{std::string(header), {}};
  const auto header_lines = split_lines(header);
  auto has_line = [&](std::string_view l) {
    for (const auto h : header_lines) {
      if (lean::trim(h) == l) return true;
    }
    return false;
  };
  const auto lines = split_lines(code);
  std::size_t i = 0;
  std::vector<std::string> added;
  for (; i < lines.size(); ++i) {
    const auto t = lean::trim(lines[i]);
    if (t.empty()) continue;
    if (t.rfind("import ", 0) != 0) break;
    if (!has_line(t) && std::find(added.begin(), added.end(), t) == added.end()) added.push_back(t);
  }
  for (const auto& imp : added) {
    if (!out.header.empty() && out.header.back() != '\n') out.header += '\n';
    out.header += imp;
  }
  out.body = join(std::vector<std::string_view>(lines.begin() + static_cast<long>(i), lines.end()));
  return out;
}

namespace {

std::string assemble(std::string_view header, std::initializer_list<std::string_view> parts) {
  std::string src(lean::trim(header));
  for (const auto part : parts) {
    src += "\n\n";
    src += lean::trim(part);
  }
  src += '\n';
  return src;
}

}  // namespace

LeanJob build_typecheck_job(const ProblemInstance& instance, std::string_view generated,
                            Setting setting) {
  if (lean::trim(generated).empty()) throw PreconditionError("generated Lean code is empty");
  auto split = hoist_imports(instance.environment_header, generated);
  if (setting == Setting::Unseen) {
    return make_job(LeanJobKind::Typecheck, assemble(split.header, {split.body}));
  }
  std::string body = split.body;
  for (const auto& decl : lean::top_level_declarations(body)) {
    if (decl.name == "conjecture") {
      body = lean::rename_identifier(body, "conjecture", kModelConjectureName);
      break;
    }
  }
  return make_job(LeanJobKind::Typecheck,
                  assemble(split.header, {instance.gold_conjecture, body}));
}

namespace {

std::string rename_single_declaration(std::string_view code, std::string_view new_name,
                                      std::string_view what) {
  const auto decls = lean::top_level_declarations(code);
  if (decls.size() != 1) {
    throw PreconditionError(std::string(what) + " must hold exactly one top-level declaration, found " +
                            std::to_string(decls.size()));
  }
  const auto& d = decls.front();
  if (d.keyword != "abbrev" && d.keyword != "def") {
    throw PreconditionError(std::string(what) + " must be an abbrev or def, found `" + d.keyword +
                            "`");
  }
  if (d.name.empty()) throw PreconditionError(std::string(what) + " declaration has no name");
  if (lean::contains_identifier(code, kGoldName) || lean::contains_identifier(code, kGeneratedName)) {
    throw PreconditionError(std::string(what) + " already uses a reserved name");
  }
  return lean::rename_identifier(code, d.name, new_name);
}

}  // namespace

LeanJob build_equiv_rfl_job(std::string_view gold_conjecture, std::string_view generated_conjecture,
                            std::string_view header) {
  auto gold_split = hoist_imports(header, gold_conjecture);
  auto gen_split = hoist_imports(gold_split.header, generated_conjecture);
  const auto gold = rename_single_declaration(gold_split.body, kGoldName, "gold conjecture");
  const auto generated =
      rename_single_declaration(gen_split.body, kGeneratedName, "generated conjecture");
  const std::string thm = "theorem thm : " + std::string(kGoldName) + " = " +
                          std::string(kGeneratedName) + " := by rfl";
  return make_job(LeanJobKind::EquivRfl, assemble(gen_split.header, {gold, generated, thm}));
}

std::string_view to_string(LeanStatus s) {
  switch (s) {
    case LeanStatus::Success:
      return "success";
    case LeanStatus::CompileError:
      return "compile_error";
    case LeanStatus::Timeout:
      return "timeout";
    case LeanStatus::ToolFailure:
      return "tool_failure";
  }
  return "?";
}

std::optional<LeanStatus> parse_lean_status(std::string_view s) {
  for (auto st : {LeanStatus::Success, LeanStatus::CompileError, LeanStatus::Timeout,
                  LeanStatus::ToolFailure}) {
    if (to_string(st) == s) return st;
  }
  return std::nullopt;
}

bool LeanOutcome::has_error() const {
  return std::any_of(messages.begin(), messages.end(),
                     [](const LeanMessage& m) { return m.severity == "error"; });
}

std::string LeanOutcome::summary() const {
  std::ostringstream os;
  os << to_string(status);
  for (const auto& m : messages) {
    if (m.severity != "error") continue;
    os << "\n" << m.line << ":" << m.column << ": " << m.text;
  }
  return os.str();
}

nlohmann::json LeanOutcome::to_json() const {
  auto msgs = nlohmann::json::array();
  for (const auto& m : messages) {
    msgs.push_back({{"severity", m.severity}, {"text", m.text}, {"line", m.line}, {"column", m.column}});
  }
  return {{"status", to_string(status)}, {"messages", msgs}, {"wall_ms", wall_time.count()}};
}

LeanOutcome LeanOutcome::from_json(const nlohmann::json& j) {
  LeanOutcome o;
  const auto status = parse_lean_status(j.at("status").get<std::string>());
  if (!status) throw Error("unknown Lean status " + j.at("status").dump());
  o.status = *status;
  for (const auto& m : j.at("messages")) {
    o.messages.push_back({m.at("severity").get<std::string>(), m.at("text").get<std::string>(),
                          m.value("line", 0), m.value("column", 0)});
  }
  o.wall_time = std::chrono::milliseconds(j.value("wall_ms", 0));
  return o;
}

std::vector<LeanMessage> parse_diagnostics(std::string_view output) {
  static const std::regex positioned(R"(^(.*?):(\d+):(\d+): (error|warning|info)(?:\([^)]*\))?: ?(.*)$)");
  static const std::regex bare(R"(^(error|warning|info): ?(.*)$)");
  std::vector<LeanMessage> out;
  bool open = false;
  for (const auto raw : split_lines(output)) {
    const std::string line(strip_cr(raw));
    std::smatch m;
    if (std::regex_match(line, m, positioned)) {
      out.push_back({m[4].str(), m[5].str(), std::stoi(m[2].str()), std::stoi(m[3].str())});
      open = true;
    } else if (std::regex_match(line, m, bare)) {
      out.push_back({m[1].str(), m[2].str(), 0, 0});
      open = true;
    } else if (open) {
      out.back().text += '\n';
      out.back().text += line;
    }
  }
  for (auto& m : out) {
    while (!m.text.empty() && (m.text.back() == '\n' || m.text.back() == ' ')) m.text.pop_back();
  }
  return out;
}

namespace {

// Errors that reveal a broken environment rather than a bad input file.
bool is_environment_error(const LeanMessage& m) {
  static constexpr std::string_view markers[] = {
      "unknown package", "unknown module prefix", "object file", "could not resolve 'HEAD'",
      "failed to load header"};
  if (m.severity != "error") return false;
  for (const auto marker : markers) {
    if (m.text.find(marker) != std::string::npos) return true;
  }
  return false;
}

}  // namespace

LeanOutcome classify_outcome(int exit_code, bool killed_by_signal, bool timed_out,
                             bool spawn_failed, std::string_view output,
                             std::chrono::milliseconds wall_time) {
  LeanOutcome o;
  o.wall_time = wall_time;
  o.messages = parse_diagnostics(output);
  if (spawn_failed) {
    o.status = LeanStatus::ToolFailure;
    o.messages.push_back({"error", "could not start the Lean toolchain: " + std::string(output), 0, 0});
    return o;
  }
  if (timed_out) {
    o.status = LeanStatus::Timeout;
    return o;
  }
  if (std::any_of(o.messages.begin(), o.messages.end(), is_environment_error) || killed_by_signal) {
    o.status = LeanStatus::ToolFailure;
    return o;
  }
  if (o.has_error()) {
    o.status = LeanStatus::CompileError;
  } else if (exit_code == 0) {
    o.status = LeanStatus::Success;
  } else {
    o.status = LeanStatus::ToolFailure;
    o.messages.push_back(
        {"error", "toolchain exited with status " + std::to_string(exit_code) + " and no error diagnostic",
         0, 0});
  }
  return o;
}

}  // namespace conjbench
