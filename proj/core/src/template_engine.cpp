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

#include "conjbench/template_engine.hpp"

#include <memory>
#include <sstream>

#include "conjbench/error.hpp"
#include "conjbench/lean_text.hpp"

namespace conjbench {
namespace {

struct Node;
using Nodes = std::vector<std::unique_ptr<Node>>;

struct Node {
  enum class Kind { Text, Var, For, If } kind;
  std::string text;      // Text: literal; Var: name; For: item var; If: condition
  std::string list;      // For: list name
  bool negate = false;   // If
  Nodes body;            // For body / If then-branch
  Nodes else_body;       // If else-branch
};

struct Token {
  enum class Kind { Text, Var, Tag } kind;
  std::string value;
};

bool blank_between(std::string_view s, std::size_t b, std::size_t e) {
  for (std::size_t i = b; i < e; ++i) {
    if (s[i] != ' ' && s[i] != '\t') return false;
  }
  return true;
}

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  std::size_t pos = 0;
  std::string text;
  while (pos < src.size()) {
    const auto var = src.find("{{", pos);
    const auto tag = src.find("{%", pos);
    const auto next = std::min(var, tag);
    if (next == std::string_view::npos) {
      text.append(src.substr(pos));
      break;
    }
    if (next == var) {
      const auto close = src.find("}}", var + 2);
      if (close == std::string_view::npos) throw TemplateError("unterminated {{ placeholder");
      text.append(src.substr(pos, var - pos));
      if (!text.empty()) out.push_back({Token::Kind::Text, std::move(text)});
      text.clear();
      out.push_back({Token::Kind::Var, lean::trim(src.substr(var + 2, close - var - 2))});
      pos = close + 2;
      continue;
    }
    const auto close = src.find("%}", tag + 2);
    if (close == std::string_view::npos) throw TemplateError("unterminated {% tag");
    std::size_t text_end = tag;
    std::size_t resume = close + 2;
    // Standalone tag line: swallow its indentation and trailing newline.
    const auto line_start = src.rfind('\n', tag == 0 ? 0 : tag - 1);
    const std::size_t ls = (tag == 0 || line_start == std::string_view::npos) ? 0 : line_start + 1;
    auto line_end = src.find('\n', resume);
    if (line_end == std::string_view::npos) line_end = src.size();
    if ((tag == 0 || ls <= tag) && blank_between(src, ls, tag) &&
        blank_between(src, resume, line_end)) {
      text_end = ls;
      resume = line_end == src.size() ? line_end : line_end + 1;
    }
    text.append(src.substr(pos, text_end - pos));
    if (!text.empty()) out.push_back({Token::Kind::Text, std::move(text)});
    text.clear();
    out.push_back({Token::Kind::Tag, lean::trim(src.substr(tag + 2, close - tag - 2))});
    pos = resume;
  }
  if (!text.empty()) out.push_back({Token::Kind::Text, std::move(text)});
  return out;
}

std::vector<std::string> words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  Nodes parse_all() {
    std::string terminator;
    auto nodes = parse_until({}, terminator);
    if (!terminator.empty()) throw TemplateError("unexpected {% " + terminator + " %}");
    return nodes;
  }

 private:
  Nodes parse_until(const std::set<std::string>& stops, std::string& hit) {
    Nodes nodes;
    while (pos_ < tokens_.size()) {
      const Token& tok = tokens_[pos_++];
      if (tok.kind == Token::Kind::Text) {
        auto n = std::make_unique<Node>();
        n->kind = Node::Kind::Text;
        n->text = tok.value;
        nodes.push_back(std::move(n));
        continue;
      }
      if (tok.kind == Token::Kind::Var) {
        if (tok.value.empty()) throw TemplateError("empty {{ }} placeholder");
        auto n = std::make_unique<Node>();
        n->kind = Node::Kind::Var;
        n->text = tok.value;
        nodes.push_back(std::move(n));
        continue;
      }
      const auto w = words(tok.value);
      if (w.empty()) throw TemplateError("empty {% %} tag");
      if (stops.contains(w[0])) {
        hit = w[0];
        return nodes;
      }
      if (w[0] == "for") {
        if (w.size() != 4 || w[2] != "in") throw TemplateError("malformed for tag: " + tok.value);
        auto n = std::make_unique<Node>();
        n->kind = Node::Kind::For;
        n->text = w[1];
        n->list = w[3];
        std::string end;
        n->body = parse_until({"endfor"}, end);
        if (end != "endfor") throw TemplateError("missing {% endfor %}");
        nodes.push_back(std::move(n));
        continue;
      }
      if (w[0] == "if") {
        auto n = std::make_unique<Node>();
        n->kind = Node::Kind::If;
        if (w.size() == 2) {
          n->text = w[1];
        } else if (w.size() == 3 && w[1] == "not") {
          n->negate = true;
          n->text = w[2];
        } else {
          throw TemplateError("malformed if tag: " + tok.value);
        }
        std::string end;
        n->body = parse_until({"else", "endif"}, end);
        if (end == "else") n->else_body = parse_until({"endif"}, end);
        if (end != "endif") throw TemplateError("missing {% endif %}");
        nodes.push_back(std::move(n));
        continue;
      }
      throw TemplateError("unknown tag: " + tok.value);
    }
    return nodes;
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

struct Frame {
  std::string var;
  const Fields* item;
};

class Renderer {
 public:
  explicit Renderer(const TemplateContext& ctx) : ctx_(ctx) {}

  void run(const Nodes& nodes) {
    for (const auto& n : nodes) visit(*n);
  }

  RenderResult result;

 private:
  void visit(const Node& n) {
    switch (n.kind) {
      case Node::Kind::Text:
        result.text += n.text;
        return;
      case Node::Kind::Var:
        substitute(n.text);
        return;
      case Node::Kind::For: {
        const auto it = ctx_.lists.find(n.list);
        if (it == ctx_.lists.end()) throw TemplateError("unknown list `" + n.list + "`");
        result.lists_iterated.insert(n.list);
        for (const auto& item : it->second) {
          frames_.push_back({n.text, &item});
          run(n.body);
          frames_.pop_back();
        }
        return;
      }
      case Node::Kind::If:
        run(condition(n.text) != n.negate ? n.body : n.else_body);
        return;
    }
  }

  bool condition(const std::string& name) const {
    if (const auto f = ctx_.flags.find(name); f != ctx_.flags.end()) return f->second;
    if (const auto l = ctx_.lists.find(name); l != ctx_.lists.end()) return !l->second.empty();
    throw TemplateError("unknown condition `" + name + "`");
  }

  void substitute(const std::string& name) {
    const auto dot = name.find('.');
    if (dot != std::string::npos) {
      const auto head = name.substr(0, dot);
      for (auto f = frames_.rbegin(); f != frames_.rend(); ++f) {
        if (f->var != head) continue;
        const auto field = f->item->find(name.substr(dot + 1));
        if (field == f->item->end()) throw TemplateError("missing field `" + name + "`");
        emit(field->second, RegionOrigin::ListItem, name);
        return;
      }
    }
    const auto v = ctx_.variables.find(name);
    if (v == ctx_.variables.end()) throw TemplateError("missing variable `" + name + "`");
    emit(v->second, RegionOrigin::Variable, name);
  }

  void emit(const std::string& value, RegionOrigin origin, const std::string& name) {
    const auto begin = result.text.size();
    result.text += value;
    result.regions.push_back({begin, result.text.size(), origin, name});
  }

  const TemplateContext& ctx_;
  std::vector<Frame> frames_;
};

}  // namespace

RenderResult render_template(std::string_view source, const TemplateContext& context) {
  Parser parser(tokenize(source));
  const auto nodes = parser.parse_all();
  Renderer r(context);
  r.run(nodes);
  return std::move(r.result);
}

std::vector<std::string> placeholder_names(std::string_view source) {
  std::vector<std::string> out;
  for (const auto& t : tokenize(source)) {
    if (t.kind == Token::Kind::Var) out.push_back(t.value);
  }
  return out;
}

std::set<std::string> loop_lists(std::string_view source) {
  std::set<std::string> out;
  for (const auto& t : tokenize(source)) {
    if (t.kind != Token::Kind::Tag) continue;
    const auto w = words(t.value);
    if (w.size() == 4 && w[0] == "for") out.insert(w[3]);
  }
  return out;
}

}  // namespace conjbench
