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

#include <optional>
#include <string_view>
#include <vector>

// Files compiled into the library from core/resources/.
namespace conjbench::resources {

struct Entry {
  std::string_view path;  // relative, e.g. "templates/conjudge.user.txt"
  std::string_view content;
};

const std::vector<Entry>& all();

inline std::optional<std::string_view> find(std::string_view path) {
  for (const auto& e : all()) {
    if (e.path == path) return e.content;
  }
  return std::nullopt;
}

}  // namespace conjbench::resources
