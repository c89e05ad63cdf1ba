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
#include "conjbench/lean_bridge.hpp"
#include "conjbench/lean_runner.hpp"
#include "conjbench/subprocess.hpp"
#include "test_support.hpp"

namespace conjbench {
namespace {

using namespace std::chrono_literals;

TEST(ExtractCode, GoldenTwoBlocks) {
  const auto in = testing::slurp(testing::fixtures_dir() / "golden/extract_two_blocks.in.txt");
  const auto expected = testing::slurp(testing::fixtures_dir() / "golden/extract_two_blocks.expected.txt");
  const auto code = extract_code(in);
  EXPECT_EQ(code.blocks.size(), 2u);
  EXPECT_FALSE(code.fallback);
  EXPECT_EQ(code.chosen + "\n", expected);
}

TEST(ExtractCode, Variants) {
  EXPECT_EQ(extract_code("```lean4\nabbrev a := 1\n```").chosen, "abbrev a := 1");
  EXPECT_EQ(extract_code("```Lean\nx\n```\ntext").chosen, "x");
  const auto unclosed = extract_code("intro\n```lean\ntheorem t : True := trivial\n");
  EXPECT_EQ(unclosed.chosen, "theorem t : True := trivial");
  const auto other = extract_code("```python\nprint(1)\n```");
  EXPECT_TRUE(other.fallback);
  EXPECT_EQ(other.chosen, "print(1)");
  const auto bare = extract_code("  abbrev conjecture : ℕ := 3  ");
  EXPECT_TRUE(bare.fallback);
  EXPECT_EQ(bare.chosen, "abbrev conjecture : ℕ := 3");
  EXPECT_EQ(extract_code("```lean\r\nabbrev a := 1\r\n```\r\n").chosen, "abbrev a := 1");
  const auto c = extract_code("```lean\na\n```\n```lean\nb\n```");
  EXPECT_EQ(ExtractedCode::from_json(c.to_json()).chosen, "b");
}

TEST(LeanJobs, IdsDependOnKindAndSource) {
  const auto a = make_job(LeanJobKind::Typecheck, "x");
  const auto b = make_job(LeanJobKind::EquivRfl, "x");
  EXPECT_NE(a.job_id, b.job_id);
  EXPECT_EQ(a.job_id, make_job(LeanJobKind::Typecheck, "x").job_id);
  EXPECT_EQ(a.timeout, std::chrono::milliseconds(300s));
  EXPECT_EQ(b.timeout, std::chrono::milliseconds(60s));
}

TEST(LeanJobs, HoistImports) {
  const auto s = hoist_imports("import Mathlib", "import Mathlib\nimport Aesop\n\nabbrev a := 1");
  EXPECT_EQ(s.header, "import Mathlib\nimport Aesop");
  EXPECT_EQ(s.body, "abbrev a := 1");
}

TEST(LeanJobs, SeenTypecheckKeepsGoldConjecture) {
  const auto p = testing::quad_roots();
  const auto job = build_typecheck_job(
      p, "abbrev conjecture : Set ℝ := {4, 0}\ntheorem quad_roots : {x : ℝ | x ^ 2 - 4 * x = 0} = conjecture := sorry",
      Setting::Seen);
  EXPECT_NE(job.source.find(p.gold_conjecture), std::string::npos);
  EXPECT_NE(job.source.find("abbrev conjecture_model : Set ℝ := {4, 0}"), std::string::npos);
  EXPECT_NE(job.source.find("= conjecture_model := sorry"), std::string::npos);
  EXPECT_EQ(job.kind, LeanJobKind::Typecheck);
  const auto only_thm = build_typecheck_job(p, p.gold_formal_statement, Setting::Seen);
  EXPECT_NE(only_thm.source.find(p.gold_conjecture), std::string::npos);
  const auto unseen = build_typecheck_job(p, "abbrev conjecture : ℕ := 1", Setting::Unseen);
  EXPECT_EQ(unseen.source.find(p.gold_conjecture), std::string::npos);
  EXPECT_THROW(build_typecheck_job(p, "  \n", Setting::Unseen), PreconditionError);
}

TEST(LeanJobs, EquivRflRenamesBothSides) {
  const auto job = build_equiv_rfl_job("abbrev conjecture : ℕ := 9", "def answer : ℕ := 3 * 3", "import Mathlib");
  EXPECT_NE(job.source.find("abbrev conjecture_gold : ℕ := 9"), std::string::npos);
  EXPECT_NE(job.source.find("def conjecture_generated : ℕ := 3 * 3"), std::string::npos);
  EXPECT_NE(job.source.find("theorem thm : conjecture_gold = conjecture_generated := by rfl"), std::string::npos);
  EXPECT_EQ(job.source.rfind("import Mathlib", 0), 0u);
  EXPECT_THROW(build_equiv_rfl_job("abbrev a := 1", "abbrev b := 1\nabbrev c := 2", ""), PreconditionError);
  EXPECT_THROW(build_equiv_rfl_job("abbrev a := 1", "theorem b : True := trivial", ""), PreconditionError);
  EXPECT_THROW(build_equiv_rfl_job("abbrev a := conjecture_gold", "abbrev b := 1", ""), PreconditionError);
}

TEST(Diagnostics, ParsePositionedBareAndContinuation) {
  const auto msgs = parse_diagnostics(
      "Scratch/x.lean:3:32: error: The rfl tactic failed.\n- The goal is not reflexive\n"
      "Scratch/x.lean:5:8: warning: declaration uses 'sorry'\n"
      "error: unknown package 'Mathlib'\n");
  ASSERT_EQ(msgs.size(), 3u);
  EXPECT_EQ(msgs[0], (LeanMessage{"error", "The rfl tactic failed.\n- The goal is not reflexive", 3, 32}));
  EXPECT_EQ(msgs[1].severity, "warning");
  EXPECT_EQ(msgs[1].line, 5);
  EXPECT_EQ(msgs[2].line, 0);
  EXPECT_TRUE(parse_diagnostics("").empty());
  EXPECT_TRUE(parse_diagnostics("stray text\n").empty());
}

TEST(Diagnostics, ClassificationOrder) {
  const auto err = "f.lean:1:0: error: bad\n";
  EXPECT_EQ(classify_outcome(-1, false, false, true, "", 0ms).status, LeanStatus::ToolFailure);
  EXPECT_EQ(classify_outcome(-1, false, true, false, err, 0ms).status, LeanStatus::Timeout);
  EXPECT_EQ(classify_outcome(-1, true, false, false, "", 0ms).status, LeanStatus::ToolFailure);
  EXPECT_EQ(classify_outcome(1, false, false, false, "f.lean:1:0: error: unknown package 'Mathlib'", 0ms).status,
            LeanStatus::ToolFailure);
  EXPECT_EQ(classify_outcome(1, false, false, false, err, 0ms).status, LeanStatus::CompileError);
  EXPECT_EQ(classify_outcome(0, false, false, false, err, 0ms).status, LeanStatus::CompileError);
  EXPECT_EQ(classify_outcome(0, false, false, false, "f.lean:1:0: warning: sorry", 0ms).status,
            LeanStatus::Success);
  EXPECT_EQ(classify_outcome(3, false, false, false, "", 0ms).status, LeanStatus::ToolFailure);
}

TEST(Diagnostics, OutcomeJsonRoundTrip) {
  auto o = classify_outcome(1, false, false, false, "f.lean:2:4: error: nope\n", 1234ms);
  const auto back = LeanOutcome::from_json(o.to_json());
  EXPECT_EQ(back.status, o.status);
  EXPECT_EQ(back.messages, o.messages);
  EXPECT_EQ(back.wall_time, 1234ms);
  EXPECT_EQ(o.summary(), "compile_error\n2:4: nope");
  EXPECT_EQ(parse_lean_status("timeout"), LeanStatus::Timeout);
  EXPECT_FALSE(parse_lean_status("ok").has_value());
  EXPECT_THROW(LeanOutcome::from_json({{"status", "ok"}, {"messages", nlohmann::json::array()}}), Error);
}

TEST(Subprocess, CapturesExitAndOutput) {
  testing::TempDir dir;
  auto r = run_process({"/bin/sh", "-c", "echo out; echo err >&2; exit 4"}, dir.path(), 5s);
  EXPECT_EQ(r.exit_code, 4);
  EXPECT_NE(r.output.find("out"), std::string::npos);
  EXPECT_NE(r.output.find("err"), std::string::npos);
  r = run_process({"/bin/sh", "-c", "kill -TERM $$"}, dir.path(), 5s);
  EXPECT_EQ(r.term_signal, SIGTERM);
  r = run_process({"/bin/sh", "-c", "sleep 20"}, dir.path(), 200ms);
  EXPECT_TRUE(r.timed_out);
  EXPECT_LT(r.wall_time, 10s);
  r = run_process({"/nonexistent/binary"}, dir.path(), 1s);
  EXPECT_TRUE(r.spawn_failed);
  r = run_process({"/bin/pwd"}, dir.path(), 1s);
  EXPECT_EQ(std::filesystem::path(r.output.substr(0, r.output.find('\n'))),
            std::filesystem::canonical(dir.path()));
}

struct ProcessRunnerTest : ::testing::Test {
  testing::TempDir dir;
  LeanWorkspace ws;
  void SetUp() override {
    testing::spit(dir / "lean-toolchain", testing::slurp(testing::fixtures_dir() / "workspace/lean-toolchain"));
    ws.root = dir.path();
    ws.command = {(testing::fixtures_dir() / "bin/lake").string(), "env", "lean"};
  }
  LeanOutcome run(const std::string& src, std::chrono::milliseconds timeout = 10s) {
    auto job = make_job(LeanJobKind::Typecheck, src);
    job.timeout = timeout;
    return ProcessLeanRunner(ws).run(job);
  }
};

TEST_F(ProcessRunnerTest, StatusesFromFakeToolchain) {
  auto ok = run("theorem t : True := sorry");
  EXPECT_EQ(ok.status, LeanStatus::Success);
  ASSERT_EQ(ok.messages.size(), 1u);
  EXPECT_EQ(ok.messages[0].severity, "warning");
  EXPECT_EQ(run("theorem := 1").status, LeanStatus::CompileError);
  auto rfl = run("theorem thm : (0:ℕ) = 1 := by rfl");
  EXPECT_EQ(rfl.status, LeanStatus::CompileError);
  EXPECT_NE(rfl.summary().find("reflexive"), std::string::npos);
  EXPECT_EQ(run("-- unknown_pkg").status, LeanStatus::ToolFailure);
  EXPECT_EQ(run("-- crash_now").status, LeanStatus::ToolFailure);
  EXPECT_EQ(run("-- exit_quietly").status, LeanStatus::ToolFailure);
  EXPECT_EQ(run("-- sleep_forever", 300ms).status, LeanStatus::Timeout);
  EXPECT_TRUE(std::filesystem::is_empty(dir / "Scratch"));
}

TEST_F(ProcessRunnerTest, MissingBinaryIsToolFailure) {
  ws.command = {"/nonexistent/lake"};
  EXPECT_EQ(run("x").status, LeanStatus::ToolFailure);
  EXPECT_THROW(ProcessLeanRunner(LeanWorkspace{dir.path(), "Scratch", {}}), ConfigError);
}

TEST_F(ProcessRunnerTest, ToolchainCheck) {
  const auto report = check_toolchain(ws);
  EXPECT_EQ(report.pinned, "leanprover/lean4:v4.19.0-rc2");
  EXPECT_NE(report.version_line.find("4.19.0-rc2"), std::string::npos);
  ws.command = {(testing::fixtures_dir() / "bin/lake_old").string()};
  EXPECT_THROW(check_toolchain(ws), ToolFailure);
  ws.command = {"/nonexistent/lake"};
  EXPECT_THROW(check_toolchain(ws), ToolFailure);
  testing::spit(dir / "lean-toolchain", "leanprover/lean4:v4.9.0\n");
  ws.command = {(testing::fixtures_dir() / "bin/lake").string()};
  EXPECT_THROW(check_toolchain(ws), ToolFailure);
  std::filesystem::remove(dir / "lean-toolchain");
  EXPECT_THROW(check_toolchain(ws), ToolFailure);
}

TEST(RecordReplay, OutcomesRoundTripExceptToolFailures) {
  testing::TempDir dir;
  auto inner = std::make_shared<testing::ScriptedLean>([](const LeanJob& job) {
    if (job.source == "broken") return LeanOutcome{};
    return job.source == "bad" ? testing::lean_error("nope") : testing::lean_success();
  });
  auto cassette = std::make_shared<OutcomeCassette>();
  cassette->set_writer(dir / "lean.jsonl");
  RecordingLeanRunner rec(inner, cassette);
  const auto good = make_job(LeanJobKind::Typecheck, "good");
  const auto bad = make_job(LeanJobKind::Typecheck, "bad");
  const auto broken = make_job(LeanJobKind::Typecheck, "broken");
  EXPECT_EQ(rec.run(good).status, LeanStatus::Success);
  EXPECT_EQ(rec.run(bad).status, LeanStatus::CompileError);
  EXPECT_EQ(rec.run(broken).status, LeanStatus::ToolFailure);
  EXPECT_EQ(rec.run(good).status, LeanStatus::Success);
  EXPECT_EQ(inner->calls(), 3);
  EXPECT_EQ(read_jsonl(dir / "lean.jsonl").size(), 2u);

  auto loaded = std::make_shared<OutcomeCassette>();
  loaded->load(dir / "lean.jsonl");
  ReplayLeanRunner replay(loaded);
  EXPECT_EQ(replay.run(bad).summary(), testing::lean_error("nope").summary());
  EXPECT_THROW(replay.run(broken), ToolFailure);
}

TEST(LeanPoolTest, BoundsConcurrency) {
  std::atomic<int> active{0}, peak{0};
  auto inner = std::make_shared<testing::ScriptedLean>([&](const LeanJob&) {
    const int now = ++active;
    int p = peak.load();
    while (now > p && !peak.compare_exchange_weak(p, now)) {}
    std::this_thread::sleep_for(5ms);
    --active;
    return testing::lean_success();
  });
  LeanPool pool(inner, 2);
  std::vector<std::thread> threads;
  for (int i = 0; i < 8; ++i) threads.emplace_back([&, i] { pool.run(make_job(LeanJobKind::Typecheck, std::to_string(i))); });
  for (auto& t : threads) t.join();
  EXPECT_LE(peak.load(), 2);
  EXPECT_EQ(inner->calls(), 8);
  EXPECT_THROW(LeanPool(inner, 0), ConfigError);
  EXPECT_GE(default_lean_workers(), 1);
}

}  // namespace
}  // namespace conjbench
