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

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

// Lexical helpers over Lean 4 source text. Nothing here elaborates Lean; it
// only knows enough of the token grammar to find identifiers outside of
// comments and string literals.
namespace conjbench::lean {

enum class SegmentKind { Code, LineComment, BlockComment, String, Char };

struct Segment {
  SegmentKind kind;
  std::size_t begin;
  std::size_t end;
};

// Partitions `src` into code, comment and literal segments, in order.
// Unterminated comments and strings run to the end of the input.
std::vector<Segment> segment(std::string_view src);

// One (possibly dotted) identifier occurring in a code segment, e.g.
// `conjecture.Prime` or `Finset.range`.
struct Identifier {
  std::size_t begin;
  std::size_t end;
  std::string_view text;
  // Text of the first dotted component.
  std::string_view head;
  // True when the identifier directly follows a `.` (field notation such as
  // `x.conjecture`), so it cannot refer to a global of that name.
  bool after_dot;
};

std::vector<Identifier> identifiers(std::string_view src);

// True if `name` occurs as the head of some identifier outside comments and
// strings, and not as a field projection.
bool contains_identifier(std::string_view src, std::string_view name);

// Replaces every identifier whose head is `from` with `to`, keeping any
// dotted suffix. Comments and literals are left untouched.
std::string rename_identifier(std::string_view src, std::string_view from, std::string_view to);

struct Declaration {
  std::string keyword;  // abbrev, def, theorem, ...
  std::string name;     // empty for `example` and anonymous instances
  std::size_t begin;    // offset of the first modifier or the keyword
  std::size_t name_end; // offset just past the name (or the keyword)
};

// Declarations starting at column 0, optionally preceded by modifiers such
// as `noncomputable` or `@[simp]`.
std::vector<Declaration> top_level_declarations(std::string_view src);

// For a single declaration `abbrev name : T := body` returns the trimmed
// type ascription `T`, if any. The scan stops at the first top-level `:=`.
std::optional<std::string> type_ascription(std::string_view decl_src);

// Trimmed text after the first top-level `:=` of a declaration.
std::optional<std::string> declaration_body(std::string_view decl_src);

std::string trim(std::string_view s);

// Collapses every run of whitespace to one space and trims both ends.
std::string normalize_whitespace(std::string_view s);

}  // namespace conjbench::lean
