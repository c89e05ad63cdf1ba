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

#include "conjbench/lean_text.hpp"

#include <algorithm>
#include <array>

namespace conjbench::lean {
namespace {

// Decodes the UTF-8 code point at `i`, storing its byte length. Invalid
// bytes decode as themselves with length 1.
char32_t decode(std::string_view s, std::size_t i, std::size_t& len) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  auto cont = [&](std::size_t k) -> char32_t {
    return i + k < s.size() ? static_cast<unsigned char>(s[i + k]) & 0x3F : 0;
  };
  if (b0 < 0x80) {
    len = 1;
    return b0;
  }
  if ((b0 >> 5) == 0x6 && i + 1 < s.size()) {
    len = 2;
    return ((b0 & 0x1F) << 6) | cont(1);
  }
  if ((b0 >> 4) == 0xE && i + 2 < s.size()) {
    len = 3;
    return ((b0 & 0x0F) << 12) | (cont(1) << 6) | cont(2);
  }
  if ((b0 >> 3) == 0x1E && i + 3 < s.size()) {
    len = 4;
    return ((b0 & 0x07) << 18) | (cont(1) << 12) | (cont(2) << 6) | cont(3);
  }
  len = 1;
  return b0;
}

// Mirrors Lean's `isLetterLike` / `isSubScriptAlnum`.
bool is_letter_like(char32_t c) {
  return (0x3b1 <= c && c <= 0x3c9 && c != 0x3bb) ||
         (0x391 <= c && c <= 0x3A9 && c != 0x3A0 && c != 0x3A3) ||
         (0x3ca <= c && c <= 0x3fb) || (0x1f00 <= c && c <= 0x1ffe) ||
         (0x2100 <= c && c <= 0x214f) || (0x1d49c <= c && c <= 0x1d59f);
}

bool is_subscript_alnum(char32_t c) {
  return (0x2080 <= c && c <= 0x2089) || (0x2090 <= c && c <= 0x209c) ||
         (0x1d62 <= c && c <= 0x1d6a);
}

bool is_ascii_alpha(char32_t c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
bool is_digit(char32_t c) { return c >= '0' && c <= '9'; }

bool is_id_first(char32_t c) { return is_ascii_alpha(c) || c == '_' || is_letter_like(c); }

bool is_id_rest(char32_t c) {
  return is_id_first(c) || is_digit(c) || c == '\'' || c == '!' || c == '?' ||
         is_subscript_alnum(c);
}

constexpr std::string_view kGuillemetOpen = "\xC2\xAB";   // «
constexpr std::string_view kGuillemetClose = "\xC2\xBB";  // »

bool starts_with_at(std::string_view s, std::size_t i, std::string_view p) {
  return s.substr(i, p.size()) == p;
}

// Length of one identifier component starting at `i`, or 0.
std::size_t component_length(std::string_view s, std::size_t i) {
  if (i >= s.size()) return 0;
  if (starts_with_at(s, i, kGuillemetOpen)) {
    auto close = s.find(kGuillemetClose, i + kGuillemetOpen.size());
    return close == std::string_view::npos ? 0 : close + kGuillemetClose.size() - i;
  }
  std::size_t len = 0;
  if (!is_id_first(decode(s, i, len))) return 0;
  std::size_t j = i + len;
  while (j < s.size()) {
    const char32_t c = decode(s, j, len);
    if (!is_id_rest(c)) break;
    j += len;
  }
  return j - i;
}

void scan_code(std::string_view src, std::size_t begin, std::size_t end,
               std::vector<Identifier>& out) {
  const std::string_view code = src.substr(0, end);
  std::size_t i = begin;
  while (i < end) {
    const auto head_len = component_length(code, i);
    if (head_len > 0) {
      std::size_t j = i + head_len;
      while (j + 1 < end && code[j] == '.') {
        const auto next = component_length(code, j + 1);
        if (next == 0) break;
        j += 1 + next;
      }
      const bool after_dot = i > 0 && src[i - 1] == '.' && !(i > 1 && src[i - 2] == '.');
      out.push_back({i, j, src.substr(i, j - i), src.substr(i, head_len), after_dot});
      i = j;
      continue;
    }
    std::size_t len = 0;
    const char32_t c = decode(code, i, len);
    if (is_digit(c)) {
      // Numeric literal: digits, and a fractional part when the dot is
      // followed by a digit (so `i.1` still splits at the dot).
      while (i < end && is_digit(static_cast<unsigned char>(code[i]))) ++i;
      if (i + 1 < end && code[i] == '.' && is_digit(static_cast<unsigned char>(code[i + 1]))) {
        ++i;
        while (i < end && is_digit(static_cast<unsigned char>(code[i]))) ++i;
      }
      continue;
    }
    i += len;
  }
}

}  // namespace

std::vector<Segment> segment(std::string_view src) {
  std::vector<Segment> out;
  std::size_t code_start = 0;
  std::size_t i = 0;
  auto flush = [&](std::size_t upto) {
    if (upto > code_start) out.push_back({SegmentKind::Code, code_start, upto});
  };
  while (i < src.size()) {
    if (starts_with_at(src, i, "--")) {
      flush(i);
      auto nl = src.find('\n', i);
      const std::size_t e = nl == std::string_view::npos ? src.size() : nl;
      out.push_back({SegmentKind::LineComment, i, e});
      i = code_start = e;
      continue;
    }
    if (starts_with_at(src, i, "/-")) {
      flush(i);
      std::size_t depth = 1;
      std::size_t j = i + 2;
      while (j < src.size() && depth > 0) {
        if (starts_with_at(src, j, "/-")) {
          ++depth;
          j += 2;
        } else if (starts_with_at(src, j, "-/")) {
          --depth;
          j += 2;
        } else {
          ++j;
        }
      }
      out.push_back({SegmentKind::BlockComment, i, j});
      i = code_start = j;
      continue;
    }
    if (src[i] == '"') {
      flush(i);
      std::size_t j = i + 1;
      while (j < src.size() && src[j] != '"') j += src[j] == '\\' ? 2 : 1;
      j = std::min(j + 1, src.size());
      out.push_back({SegmentKind::String, i, j});
      i = code_start = j;
      continue;
    }
    if (src[i] == '\'') {
      // A quote directly after an identifier character is a prime (x').
      bool prime = false;
      if (i > 0) {
        std::size_t back = i - 1;
        while (back > 0 && (static_cast<unsigned char>(src[back]) & 0xC0) == 0x80) --back;
        std::size_t len = 0;
        prime = is_id_rest(decode(src, back, len));
      }
      if (!prime) {
        std::size_t j = i + 1;
        if (j < src.size() && src[j] == '\\') j += 2;
        else if (j < src.size()) {
          std::size_t len = 0;
          decode(src, j, len);
          j += len;
        }
        if (j < src.size() && src[j] == '\'') {
          flush(i);
          out.push_back({SegmentKind::Char, i, j + 1});
          i = code_start = j + 1;
          continue;
        }
      }
    }
    ++i;
  }
  flush(src.size());
  return out;
}

std::vector<Identifier> identifiers(std::string_view src) {
  std::vector<Identifier> out;
  for (const auto& seg : segment(src)) {
    if (seg.kind == SegmentKind::Code) scan_code(src, seg.begin, seg.end, out);
  }
  return out;
}

bool contains_identifier(std::string_view src, std::string_view name) {
  const auto ids = identifiers(src);
  return std::any_of(ids.begin(), ids.end(),
                     [&](const Identifier& id) { return id.head == name && !id.after_dot; });
}

std::string rename_identifier(std::string_view src, std::string_view from, std::string_view to) {
  std::string out;
  out.reserve(src.size());
  std::size_t pos = 0;
  for (const auto& id : identifiers(src)) {
    if (id.head != from || id.after_dot) continue;
    out.append(src.substr(pos, id.begin - pos));
    out.append(to);
    pos = id.begin + id.head.size();
  }
  out.append(src.substr(pos));
  return out;
}

namespace {

constexpr std::array kDeclKeywords = {
    std::string_view{"abbrev"},    std::string_view{"def"},       std::string_view{"theorem"},
    std::string_view{"lemma"},     std::string_view{"instance"},  std::string_view{"structure"},
    std::string_view{"inductive"}, std::string_view{"class"},     std::string_view{"example"},
    std::string_view{"axiom"},     std::string_view{"opaque"}};

constexpr std::array kModifiers = {std::string_view{"noncomputable"}, std::string_view{"private"},
                                   std::string_view{"protected"},     std::string_view{"partial"},
                                   std::string_view{"unsafe"}};

template <typename Array>
bool is_one_of(const Array& arr, std::string_view s) {
  return std::find(arr.begin(), arr.end(), s) != arr.end();
}

bool is_blank(char c) { return c == ' ' || c == '\t' || c == '\r'; }

}  // namespace

std::vector<Declaration> top_level_declarations(std::string_view src) {
  std::vector<Declaration> out;
  const auto ids = identifiers(src);
  for (std::size_t k = 0; k < ids.size(); ++k) {
    const auto& id = ids[k];
    if (!is_one_of(kDeclKeywords, id.text)) continue;
    // Walk back over modifiers and attributes to the start of the line.
    std::size_t m = k;
    std::size_t cursor = id.begin;
    bool ok = false;
    while (true) {
      std::size_t p = cursor;
      while (p > 0 && is_blank(src[p - 1])) --p;
      if (p == 0 || src[p - 1] == '\n') {
        // Column-0 rule: the first token on the line must start the line.
        ok = p == cursor;
        break;
      }
      if (src[p - 1] == ']') {
        const auto open = src.rfind("@[", p - 1);
        if (open == std::string_view::npos) break;
        cursor = open;
        continue;
      }
      if (m > 0 && ids[m - 1].end == p && is_one_of(kModifiers, ids[m - 1].text)) {
        --m;
        cursor = ids[m].begin;
        continue;
      }
      break;
    }
    if (!ok) continue;
    Declaration decl{std::string(id.text), "", cursor, id.end};
    if (id.text != "example" && k + 1 < ids.size()) {
      const auto& next = ids[k + 1];
      // The name must follow the keyword with only blanks in between.
      bool adjacent = true;
      for (std::size_t p = id.end; p < next.begin; ++p) {
        if (!is_blank(src[p]) && src[p] != '\n') adjacent = false;
      }
      if (adjacent) {
        decl.name = std::string(next.text);
        decl.name_end = next.end;
      }
    }
    out.push_back(std::move(decl));
  }
  return out;
}

namespace {

// Offset of the first `:=` outside brackets, comments and strings.
std::optional<std::size_t> find_assign(std::string_view src, std::size_t from) {
  int depth = 0;
  for (const auto& seg : segment(src)) {
    if (seg.kind != SegmentKind::Code || seg.end <= from) continue;
    for (std::size_t i = std::max(seg.begin, from); i < seg.end; ++i) {
      const char c = src[i];
      if (c == '(' || c == '[' || c == '{') ++depth;
      else if (c == ')' || c == ']' || c == '}') --depth;
      else if (depth == 0 && c == ':' && i + 1 < seg.end && src[i + 1] == '=') return i;
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<std::string> type_ascription(std::string_view decl_src) {
  const auto decls = top_level_declarations(decl_src);
  if (decls.empty()) return std::nullopt;
  const std::size_t after_name = decls.front().name_end;
  const auto assign = find_assign(decl_src, after_name);
  const std::size_t stop = assign.value_or(decl_src.size());
  // The ascription colon is the first top-level `:` after the binders.
  int depth = 0;
  for (const auto& seg : segment(decl_src)) {
    if (seg.kind != SegmentKind::Code || seg.end <= after_name) continue;
    for (std::size_t i = std::max(seg.begin, after_name); i < std::min(seg.end, stop); ++i) {
      const char c = decl_src[i];
      if (c == '(' || c == '[' || c == '{') ++depth;
      else if (c == ')' || c == ']' || c == '}') --depth;
      else if (depth == 0 && c == ':') return trim(decl_src.substr(i + 1, stop - i - 1));
    }
  }
  return std::nullopt;
}

std::optional<std::string> declaration_body(std::string_view decl_src) {
  const auto decls = top_level_declarations(decl_src);
  const std::size_t from = decls.empty() ? 0 : decls.front().name_end;
  const auto assign = find_assign(decl_src, from);
  if (!assign) return std::nullopt;
  return trim(decl_src.substr(*assign + 2));
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::string normalize_whitespace(std::string_view s) {
  std::string out;
  bool pending = false;
  for (char c : s) {
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      pending = !out.empty();
      continue;
    }
    if (pending) out.push_back(' ');
    pending = false;
    out.push_back(c);
  }
  return out;
}

}  // namespace conjbench::lean
