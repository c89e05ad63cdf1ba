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

#include "conjbench/dataset.hpp"
#include "conjbench/error.hpp"
#include "test_support.hpp"

namespace conjbench {
namespace {

using testing::quad_roots;

std::string record_line(const ProblemInstance& p) { return to_json(p).dump() + "\n"; }

TEST(Dataset, QuadRootsLoadsAsNumerical) {
  const auto ds = parse_dataset(
      R"({"id":"quad_roots","source":"PutnamBench","informal_statement":"What are the real roots of x²−4x?",)"
      R"("gold_conjecture":"abbrev conjecture : Set ℝ := {0, 4}",)"
      R"("gold_formal_statement":"theorem quad_roots : {x : ℝ | x ^ 2 - 4 * x = 0} = conjecture := sorry",)"
      R"("solution_type":"Numerical"})",
      "inline");
  ASSERT_EQ(ds.instances.size(), 1u);
  EXPECT_EQ(ds.instances[0].solution_type, SolutionType::Numerical);
  EXPECT_EQ(ds.instances[0].environment_header, "import Mathlib");
  EXPECT_EQ(ds.manifest.problem_count, 1u);
  EXPECT_EQ(ds.manifest.count(SolutionType::Numerical), 1u);
  EXPECT_EQ(ds.manifest.schema_version, "1");
}

TEST(Dataset, EmptyFileGivesZeroCounts) {
  testing::TempDir dir;
  testing::spit(dir / "empty.jsonl", "");
  const auto ds = load_dataset(dir / "empty.jsonl");
  EXPECT_TRUE(ds.instances.empty());
  EXPECT_EQ(ds.manifest.problem_count, 0u);
  for (auto t : {SolutionType::Numerical, SolutionType::Algebraic, SolutionType::Proof}) {
    EXPECT_EQ(ds.manifest.count(t), 0u);
  }
  EXPECT_EQ(ds.manifest.name, "empty");
}

TEST(Dataset, SampleFixtureLoadsInFileOrder) {
  const auto ds = load_dataset(testing::fixtures_dir() / "dataset" / "sample.jsonl");
  ASSERT_EQ(ds.instances.size(), 12u);
  EXPECT_EQ(ds.instances.front().id, "quad_roots");
  EXPECT_EQ(ds.manifest.count(SolutionType::Numerical) + ds.manifest.count(SolutionType::Algebraic) +
                ds.manifest.count(SolutionType::Proof),
            ds.manifest.problem_count);
  ASSERT_NE(ds.find("combi_handshakes_part_a"), nullptr);
  ASSERT_NE(ds.find("combi_handshakes_part_b"), nullptr);
  EXPECT_EQ(ds.find("combi_handshakes_part_a")->source, Source::CombiBench);
  EXPECT_EQ(ds.find("missing"), nullptr);
}

TEST(Dataset, ErrorsCarryLineNumbers) {
  auto p = quad_roots();
  const auto good = record_line(p);
  try {
    parse_dataset(good + "{not json}\n", "x");
    FAIL();
  } catch (const DatasetError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  try {
    parse_dataset(good + "\n" + good, "x");
    FAIL();
  } catch (const DatasetError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_NE(std::string(e.what()).find("duplicate id"), std::string::npos);
  }
}

TEST(Dataset, RejectsInvariantViolations) {
  auto p = quad_roots();
  p.gold_formal_statement = "theorem quad_roots : {x : ℝ | x = 0} = {0} := sorry";
  EXPECT_THROW(validate_instance(p), DatasetError);

  p = quad_roots();
  p.gold_formal_statement = "theorem quad_roots : True := sorry -- conjecture";
  EXPECT_THROW(validate_instance(p), DatasetError);

  p = quad_roots();
  p.gold_conjecture = "abbrev answer : Set ℝ := {0, 4}";
  EXPECT_THROW(validate_instance(p), DatasetError);

  p = quad_roots();
  p.gold_conjecture = "abbrev conjecture : ℕ := 1\nabbrev other : ℕ := 2";
  EXPECT_THROW(validate_instance(p), DatasetError);

  p = testing::proof_instance();
  p.gold_conjecture = "abbrev conjecture : Bool := true";
  EXPECT_THROW(validate_instance(p), DatasetError);

  auto j = to_json(quad_roots());
  j["solution_type"] = "Geometric";
  EXPECT_THROW(instance_from_json(j), DatasetError);
  j = to_json(quad_roots());
  j["source"] = "MiniF2F";
  EXPECT_THROW(instance_from_json(j), DatasetError);
  j = to_json(quad_roots());
  j.erase("informal_statement");
  EXPECT_THROW(instance_from_json(j), DatasetError);
}

TEST(Dataset, SerialiseRoundTrip) {
  const auto ds = load_dataset(testing::fixtures_dir() / "dataset" / "sample.jsonl");
  const auto again = parse_dataset(serialize_dataset(ds.instances), "again");
  EXPECT_EQ(again.instances, ds.instances);
  testing::TempDir dir;
  save_dataset(ds.instances, dir / "copy.jsonl");
  EXPECT_EQ(load_dataset(dir / "copy.jsonl").instances, ds.instances);
}

TEST(Dataset, FilterInstances) {
  const auto ds = load_dataset(testing::fixtures_dir() / "dataset" / "sample.jsonl");
  InstanceFilter proof;
  proof.solution_type = SolutionType::Proof;
  const auto proofs = filter_instances(ds.instances, proof);
  EXPECT_EQ(proofs.size(), ds.manifest.count(SolutionType::Proof));
  for (const auto& p : proofs) EXPECT_EQ(p.solution_type, SolutionType::Proof);

  InstanceFilter none;
  none.ids = std::set<std::string>{};
  EXPECT_TRUE(filter_instances(ds.instances, none).empty());

  std::vector<ProblemInstance> two = {quad_roots(), quad_roots()};
  two[1].id = "combi_x";
  two[1].source = Source::CombiBench;
  InstanceFilter combi;
  combi.source = Source::CombiBench;
  const auto got = filter_instances(two, combi);
  ASSERT_EQ(got.size(), 1u);
  EXPECT_EQ(got[0].id, "combi_x");

  InstanceFilter ids;
  ids.ids = std::set<std::string>{"odd_sum", "quad_roots"};
  const auto picked = filter_instances(ds.instances, ids);
  ASSERT_EQ(picked.size(), 2u);
  EXPECT_EQ(picked[0].id, "quad_roots");
  EXPECT_EQ(picked[1].id, "odd_sum");
}

TEST(Dataset, StripConjectureForSetting) {
  const auto p = quad_roots();
  const auto seen = strip_conjecture_for_setting(p, Setting::Seen);
  ASSERT_TRUE(seen.conjecture_block.has_value());
  EXPECT_EQ(*seen.conjecture_block, "abbrev conjecture : Set ℝ := {0, 4}");
  EXPECT_EQ(seen.informal_statement, p.informal_statement);
  const auto unseen = strip_conjecture_for_setting(p, Setting::Unseen);
  EXPECT_FALSE(unseen.conjecture_block.has_value());
  EXPECT_EQ(unseen.environment_header, "import Mathlib");
}

TEST(Dataset, EnumNames) {
  EXPECT_EQ(parse_setting("seen"), Setting::Seen);
  EXPECT_EQ(parse_setting("Unseen"), Setting::Unseen);
  EXPECT_FALSE(parse_setting("hidden").has_value());
  EXPECT_EQ(to_string(SolutionType::Algebraic), "Algebraic");
  EXPECT_EQ(parse_source("CombiBench"), Source::CombiBench);
}

}  // namespace
}  // namespace conjbench
