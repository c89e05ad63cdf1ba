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

#include "conjbench/error.hpp"
#include "conjbench/leanfire.hpp"
#include "test_support.hpp"

namespace conjbench {
namespace {

const char* kCot = "- The polynomial factors as x(x - 4).\n- The roots are 0 and 4.";
const char* kLot = "- Lean: `x ^ 2 - 4 * x = x * (x - 4)`\n- Lean: `({0, 4} : Set ℝ)`";

struct FireTest : ::testing::Test {
  std::vector<PromptBundle> prompts;
  std::vector<SamplingSpec> specs;
  std::string cot_reply = kCot;
  std::string lot_reply = kLot;
  std::shared_ptr<testing::ScriptedProvider> provider = std::make_shared<testing::ScriptedProvider>(
      [this](const PromptBundle& p, const SamplingSpec& s) {
        prompts.push_back(p);
        specs.push_back(s);
        return p.template_id.name == TemplateName::CotGen ? cot_reply : lot_reply;
      });
  Gateway gateway{Gateway::Options{GatewayMode::Live, {}, nullptr, nullptr}, nullptr, testing::resolve_all(provider)};
  FireSampling sampling{{"cot-model", 0.7, 891, std::nullopt}, {"lot-model", 0.7, 891, std::nullopt}};
};

TEST_F(FireTest, StagesSeeOnlyWhatTheyShould) {
  const auto q = testing::quad_roots();
  const auto r = FirePipeline(gateway).run_fire(q, Setting::Seen, sampling, Ablation::FewShot);
  ASSERT_FALSE(r.failure.has_value());
  ASSERT_EQ(prompts.size(), 2u);
  EXPECT_EQ(prompts[0].template_id.describe(), "cot_gen[few_shot]");
  EXPECT_EQ(prompts[1].template_id.describe(), "lot_gen[few_shot]");
  for (const auto& p : prompts) {
    EXPECT_EQ(testing::region_text(p, "query.informal_statement"), q.informal_statement);
    EXPECT_EQ(p.user_message.find(q.gold_formal_statement), std::string::npos);
    EXPECT_EQ(p.exemplar_ids.size(), 5u);
  }
  EXPECT_EQ(testing::region_text(prompts[1], "query.cot"), kCot);
  EXPECT_EQ(specs[0].model_id, "cot-model");
  EXPECT_EQ(specs[1].model_id, "lot-model");
  ASSERT_TRUE(r.autoformalise.has_value());
  EXPECT_EQ(r.autoformalise->template_id.describe(), "autoformalise[seen,few_shot,hints]");
  EXPECT_EQ(testing::region_text(*r.autoformalise, "query.combined_cot_lot"), r.trace.combined);
  EXPECT_EQ(testing::region_text(*r.autoformalise, "query.conjecture"), q.gold_conjecture);
  EXPECT_EQ(r.trace.combined, assemble_combined_hints(kCot, kLot));
}

TEST_F(FireTest, UnseenWithholdsConjecture) {
  const auto q = testing::quad_roots();
  const auto r = FirePipeline(gateway).run_fire(q, Setting::Unseen, sampling, Ablation::FewShot);
  ASSERT_TRUE(r.autoformalise.has_value());
  EXPECT_EQ(r.autoformalise->template_id.describe(), "autoformalise[few_shot,hints]");
  EXPECT_EQ(r.autoformalise->user_message.find(q.gold_conjecture), std::string::npos);
  EXPECT_THROW(testing::region_text(*r.autoformalise, "query.conjecture"), std::runtime_error);
}

TEST_F(FireTest, NoFewShotAblationDropsExemplars) {
  const auto r = FirePipeline(gateway).run_fire(testing::quad_roots(), Setting::Seen, sampling, Ablation::NoFewShot);
  for (const auto& p : prompts) EXPECT_TRUE(p.exemplar_ids.empty());
  ASSERT_TRUE(r.autoformalise.has_value());
  EXPECT_TRUE(r.autoformalise->exemplar_ids.empty());
  EXPECT_EQ(r.autoformalise->template_id.describe(), "autoformalise[seen,hints]");
  EXPECT_EQ(r.trace.to_json().at("ablation"), "no_few_shot");
}

TEST_F(FireTest, EmptyCotStopsBeforeLot) {
  cot_reply = "   \n";
  const auto r = FirePipeline(gateway).run_fire(testing::quad_roots(), Setting::Seen, sampling, Ablation::FewShot);
  ASSERT_TRUE(r.failure.has_value());
  EXPECT_EQ(r.failure->stage, "cot");
  EXPECT_EQ(prompts.size(), 1u);
  EXPECT_FALSE(r.autoformalise.has_value());
  EXPECT_THROW(FirePipeline(gateway).generate_lot(testing::quad_roots(), " ", Ablation::FewShot, sampling.lot),
               PreconditionError);
}

TEST_F(FireTest, MismatchedStagesFailAtCombine) {
  cot_reply = "Just prose with no steps.";
  const auto r = FirePipeline(gateway).run_fire(testing::quad_roots(), Setting::Seen, sampling, Ablation::FewShot);
  ASSERT_TRUE(r.failure.has_value());
  EXPECT_EQ(r.failure->stage, "combine");
  EXPECT_EQ(prompts.size(), 2u);
}

TEST_F(FireTest, TraceDigestIsStable) {
  const auto a = FirePipeline(gateway).run_fire(testing::quad_roots(), Setting::Seen, sampling, Ablation::FewShot);
  const auto b = FirePipeline(gateway).run_fire(testing::quad_roots(), Setting::Unseen, sampling, Ablation::FewShot);
  EXPECT_EQ(a.trace.digest(), b.trace.digest());
  EXPECT_EQ(a.trace.to_json().at("cot_stage").at("seed"), 891);
}

TEST(AutoformaliseVariables, PerSetting) {
  const auto q = testing::quad_roots();
  const auto seen = autoformalise_variables(q, Setting::Seen, std::nullopt);
  EXPECT_EQ(seen.at("query.conjecture"), q.gold_conjecture);
  EXPECT_EQ(seen.at("query.name"), "quad_roots");
  EXPECT_FALSE(seen.contains("query.combined_cot_lot"));
  const auto unseen = autoformalise_variables(q, Setting::Unseen, std::string("hints"));
  EXPECT_FALSE(unseen.contains("query.conjecture"));
  EXPECT_EQ(unseen.at("query.combined_cot_lot"), "hints");
}

}  // namespace
}  // namespace conjbench
