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
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

// A deliberately small subset of Jinja: `{{ name }}` / `{{ item.field }}`
// substitution, `{% for item in list %}...{% endfor %}`, and
// `{% if [not] name %}...{% else %}...{% endif %}`. A line holding nothing
// but one `{% %}` tag is dropped together with its newline (Jinja's
// trim_blocks + lstrip_blocks behaviour).
namespace conjbench {

using Fields = std::map<std::string, std::string>;

struct TemplateContext {
  // Dotted names, e.g. "query.informal_statement".
  std::map<std::string, std::string> variables;
  // Boolean switches usable in `{% if %}`.
  std::map<std::string, bool> flags;
  // Named lists for `{% for %}`; a list is truthy in `{% if %}` when non-empty.
  std::map<std::string, std::vector<Fields>> lists;
};

enum class RegionOrigin { Variable, ListItem };

// A span of rendered output that came from a substitution rather than from
// the template text itself.
struct Region {
  std::size_t begin;
  std::size_t end;
  RegionOrigin origin;
  std::string name;  // placeholder as written, e.g. "example.cot"
};

struct RenderResult {
  std::string text;
  std::vector<Region> regions;
  std::set<std::string> lists_iterated;
};

// Throws TemplateError on syntax errors, unknown names, or unbound variables.
RenderResult render_template(std::string_view source, const TemplateContext& context);

// Every `{{ ... }}` name in the template, in order of appearance.
std::vector<std::string> placeholder_names(std::string_view source);

// Names of lists iterated by `{% for %}` loops.
std::set<std::string> loop_lists(std::string_view source);

}  // namespace conjbench
