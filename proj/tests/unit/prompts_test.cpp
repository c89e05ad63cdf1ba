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


#include <gtest/gtest.h>

#include <algorithm>
#include <regex>

#include "conjbench/error.hpp"
#include "conjbench/leanfire.hpp"
#include "conjbench/prompts.hpp"
#include "conjbench/template_engine.hpp"
#include "test_support.hpp"

namespace conjbench {
namespace {

using testing::quad_roots;

std::string golden(const std::string& name) {
  return testing::slurp(testing::fixtures_dir() / "golden" / name);
}

TEST(TemplateEngine, SubstitutesAndRecordsRegions) {
  TemplateContext ctx;
  ctx.variables = {{"query.name", "quad_roots"}};
  const auto r = render_template("Name: {{ query.name }}!", ctx);
  EXPECT_EQ(r.text, "Name: quad_roots!");
  ASSERT_EQ(r.regions.size(), 1u);
  EXPECT_EQ(r.text.substr(r.regions[0].begin, r.regions[0].end - r.regions[0].begin), "quad_roots");
  EXPECT_EQ(r.regions[0].origin, RegionOrigin::Variable);
  EXPECT_EQ(r.regions[0].name, "query.name");
}

TEST(TemplateEngine, LoopsAndConditionalsTrimTagLines) {
  TemplateContext ctx;
  ctx.flags = {{"seen", false}};
  ctx.lists["examples"] = {{{"id", "a"}}, {{"id", "b"}}};
  const std::string src =
      "start\n{% for example in examples %}\nitem {{ example.id }}\n{% endfor %}\n{% if seen %}\nseen\n{% else %}\nhidden\n{% endif %}\n{% if not seen %}\nnot seen\n{% endif %}\nend";
  const auto r = render_template(src, ctx);
  EXPECT_EQ(r.text, "start\nitem a\nitem b\nhidden\nnot seen\nend");
  EXPECT_TRUE(r.lists_iterated.contains("examples"));
  ASSERT_EQ(r.regions.size(), 2u);
  EXPECT_EQ(r.regions[0].origin, RegionOrigin::ListItem);
}

TEST(TemplateEngine, ListTruthiness) {
  TemplateContext ctx;
  ctx.lists["examples"] = {};
  EXPECT_EQ(render_template("{% if examples %}yes{% else %}no{% endif %}", ctx).text, "no");
  ctx.lists["examples"] = {{{"id", "x"}}};
  EXPECT_EQ(render_template("{% if examples %}yes{% else %}no{% endif %}", ctx).text, "yes");
}

TEST(TemplateEngine, Errors) {
  TemplateContext ctx;
  EXPECT_THROW(render_template("{{ missing }}", ctx), TemplateError);
  EXPECT_THROW(render_template("{{ open", ctx), TemplateError);
  EXPECT_THROW(render_template("{% for x in xs %}", ctx), TemplateError);
  EXPECT_THROW(render_template("{% endif %}", ctx), TemplateError);
  EXPECT_THROW(render_template("{% frobnicate %}", ctx), TemplateError);
  EXPECT_THROW(render_template("{% if nothing %}x{% endif %}", ctx), TemplateError);
}

TEST(TemplateEngine, PlaceholderNamesAndLoops) {
  const auto src = template_text(TemplateName::LotGen, false);
  const auto names = placeholder_names(src);
  EXPECT_NE(std::find(names.begin(), names.end(), "query.cot"), names.end());
  EXPECT_NE(std::find(names.begin(), names.end(), "example.lot"), names.end());
  EXPECT_TRUE(loop_lists(src).contains("examples"));
}

TEST(Prompts, TemplateIdRules) {
  EXPECT_EQ((TemplateId{TemplateName::Autoformalise, true, true, true}.describe()),
            "autoformalise[seen,few_shot,hints]");
  EXPECT_EQ(TemplateId{TemplateName::ConJudge}.describe(), "conjudge[]");
  EXPECT_THROW(validate_template_id({TemplateName::StandaloneConjecture, false, true, false}), TemplateError);
  EXPECT_THROW(validate_template_id({TemplateName::CotGen, false, true, true}), TemplateError);
  EXPECT_NO_THROW(validate_template_id({TemplateName::CotGen, false, false, false}));
  EXPECT_EQ(parse_template_name("grader_compare"), TemplateName::GraderCompare);
  EXPECT_FALSE(parse_template_name("nope").has_value());
}

TEST(Prompts, FiveSeedsInFixedOrder) {
  const auto& seeds = seed_exemplars();
  ASSERT_EQ(seeds.size(), 5u);
  const std::vector<std::string> ids = {"putnam_2004_a1", "putnam_2009_b2", "putnam_2013_b2", "putnam_2014_a2",
                                        "putnam_2015_a2"};
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_EQ(seeds[i].id, ids[i]);
    EXPECT_TRUE(is_seed_id(ids[i]));
    EXPECT_EQ(parse_cot_steps(seeds[i].cot).size(), parse_lot_snippets(seeds[i].lot).size()) << ids[i];
    EXPECT_EQ(assemble_combined_hints(seeds[i].cot, seeds[i].lot), seeds[i].combined) << ids[i];
  }
  EXPECT_FALSE(is_seed_id("quad_roots"));
  EXPECT_NE(seeds[4].combined.find("a 0 = 1"), std::string::npos);
  EXPECT_NE(seeds[4].combined.find("a 1 = 2"), std::string::npos);
  EXPECT_NE(seeds[4].conjecture.find("abbrev conjecture : ℕ := 181"), std::string::npos);
  EXPECT_NE(seeds[3].lot.find("Matrix (Fin n) (Fin n) ℝ"), std::string::npos);
  EXPECT_TRUE(seeds[0].cot.starts_with("- Each attempt has a value in {0,1}"));
}

TEST(Prompts, SeenFewShotHintsExample) {
  auto vars = autoformalise_variables(quad_roots(), Setting::Seen, std::string("- step\n  Lean: x"));
  const auto b = render({TemplateName::Autoformalise, true, true, true}, vars, seed_exemplars());
  EXPECT_NE(b.user_message.find("The code below presents a solution implementation written in Lean 4."),
            std::string::npos);
  EXPECT_NE(b.user_message.find("**Combined Hints**\n- step\n  Lean: x"), std::string::npos);
  EXPECT_NE(b.user_message.find("abbrev conjecture : Set ℝ := {0, 4}"), std::string::npos);
  EXPECT_EQ(b.exemplar_ids.size(), 5u);
}

TEST(Prompts, StandaloneExample) {
  const auto b = render({TemplateName::StandaloneConjecture}, {{"query.informal_statement", "X"}});
  EXPECT_NE(b.user_message.find("abbrev solution {solution code}"), std::string::npos);
  EXPECT_NE(b.user_message.find("**Informal statement**\nX"), std::string::npos);
}

TEST(Prompts, HashIsDeterministicAndSensitive) {
  const auto vars = autoformalise_variables(quad_roots(), Setting::Unseen, std::nullopt);
  const TemplateId id{TemplateName::Autoformalise, false, false, false};
  const auto a = render(id, vars);
  const auto b = render(id, vars);
  EXPECT_EQ(a.content_hash, b.content_hash);
  auto other = vars;
  other["query.name"] = "other";
  EXPECT_NE(render(id, other).content_hash, a.content_hash);
}

TEST(Prompts, ExemplarContract) {
  const auto vars = autoformalise_variables(quad_roots(), Setting::Unseen, std::nullopt);
  EXPECT_THROW(render({TemplateName::Autoformalise, false, false, false}, vars, seed_exemplars()), TemplateError);
  EXPECT_THROW(render({TemplateName::Autoformalise, false, true, false}, vars), TemplateError);
  EXPECT_THROW(render({TemplateName::ConJudge}, {{"conjecture", "a"}, {"statement1", "b"}, {"statement2", "c"}},
                      seed_exemplars()),
               TemplateError);
  EXPECT_THROW(render({TemplateName::Autoformalise, false, false, true}, vars), TemplateError);
}

TEST(Prompts, UnseenVariablesOmitConjecture) {
  const auto unseen = autoformalise_variables(quad_roots(), Setting::Unseen, std::nullopt);
  EXPECT_FALSE(unseen.contains("query.conjecture"));
  const auto seen = autoformalise_variables(quad_roots(), Setting::Seen, std::nullopt);
  EXPECT_EQ(seen.at("query.conjecture"), "abbrev conjecture : Set ℝ := {0, 4}");
  EXPECT_THROW(render({TemplateName::Autoformalise, true, false, false}, unseen), TemplateError);
}

TEST(Prompts, NoFewShotHasNoSeedIdsOrExampleHeaders) {
  const auto vars = autoformalise_variables(quad_roots(), Setting::Seen, std::string("- a"));
  for (const TemplateId& id : {TemplateId{TemplateName::CotGen}, TemplateId{TemplateName::Autoformalise, true},
                               TemplateId{TemplateName::Autoformalise, true, false, true}}) {
    auto v = vars;
    v["query.cot"] = "- a";
    const auto b = render(id, v);
    EXPECT_EQ(b.user_message.find("EXAMPLE"), std::string::npos);
    for (const auto& s : seed_exemplars()) EXPECT_EQ(b.user_message.find(s.id), std::string::npos);
  }
}

TEST(Prompts, EveryTemplateCloses) {
  PromptVariables vars = autoformalise_variables(quad_roots(), Setting::Seen, std::string("- a\n  Lean: b"));
  vars["query.cot"] = "- a";
  vars["conjecture"] = "c";
  vars["statement1"] = "s1";
  vars["statement2"] = "s2";
  vars["formal_statement"] = "f";
  const std::regex leftover(R"(\{\{|\}\}|\{%|%\})");
  for (auto name : {TemplateName::CotGen, TemplateName::LotGen, TemplateName::Autoformalise,
                    TemplateName::StandaloneConjecture, TemplateName::ConJudge, TemplateName::GraderBackTranslate,
                    TemplateName::GraderCompare}) {
    std::vector<TemplateId> ids;
    if (name == TemplateName::Autoformalise) {
      for (int m = 0; m < 8; ++m) ids.push_back({name, (m & 1) != 0, (m & 2) != 0, (m & 4) != 0});
    } else if (name == TemplateName::CotGen || name == TemplateName::LotGen) {
      ids = {{name, false, true}, {name}};
    } else {
      ids = {{name}};
    }
    for (const auto& id : ids) {
      const auto b = id.few_shot ? render(id, vars, seed_exemplars()) : render(id, vars);
      EXPECT_FALSE(std::regex_search(b.user_message, leftover)) << id.describe();
      EXPECT_FALSE(std::regex_search(b.system_message, leftover)) << id.describe();
    }
  }
}

TEST(Prompts, AssembleCombinedHints) {
  EXPECT_EQ(assemble_combined_hints("- a\n- b\n- c", "Lean: x\nLean: y\nLean: z"),
            "- a\n  Lean: x\n\n- b\n  Lean: y\n\n- c\n  Lean: z");
  const auto out = assemble_combined_hints(golden("assemble_2_1.cot.txt"), golden("assemble_2_1.lot.txt"));
  EXPECT_EQ(out + "\n", golden("assemble_2_1.expected.txt"));
  EXPECT_THROW(assemble_combined_hints("", "Lean: x"), PreconditionError);
  EXPECT_THROW(assemble_combined_hints("no steps here", ""), PreconditionError);
  EXPECT_THROW(assemble_combined_hints("- a", "Lean: x\nLean: y"), PreconditionError);
}

TEST(Prompts, ParseStepsAndSnippets) {
  const auto steps = parse_cot_steps("preamble\n- one\n  more\n\n- two\n");
  ASSERT_EQ(steps.size(), 2u);
  EXPECT_EQ(steps[0], "- one\n  more");
  const auto snippets = parse_lot_snippets("- Lean: a\n    b\n  Lean: c\n");
  ASSERT_EQ(snippets.size(), 2u);
  EXPECT_EQ(snippets[0], "Lean: a\n    b");
  EXPECT_EQ(snippets[1], "Lean: c");
}

TEST(Prompts, BundleJsonCarriesRegions) {
  const auto b = render({TemplateName::StandaloneConjecture}, {{"query.informal_statement", "X"}});
  const auto j = b.to_json();
  EXPECT_EQ(j.at("template"), "standalone_conjecture[]");
  ASSERT_EQ(j.at("regions").size(), 1u);
  EXPECT_EQ(j.at("regions")[0].at("origin"), "variable");
  EXPECT_EQ(j.at("content_hash"), b.content_hash);
}

}  // namespace
}  // namespace conjbench
