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

#include "conjbench/digest.hpp"
#include "conjbench/lean_text.hpp"

namespace conjbench {
namespace {

TEST(Digest, KnownSha256) {
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Digest, JsonDigestIgnoresKeyInsertionOrder) {
  nlohmann::json a;
  a["x"] = 1;
  a["y"] = "two";
  nlohmann::json b;
  b["y"] = "two";
  b["x"] = 1;
  EXPECT_EQ(json_digest(a), json_digest(b));
  b["x"] = 2;
  EXPECT_NE(json_digest(a), json_digest(b));
}

TEST(LeanText, SegmentsCommentsAndStrings) {
  const std::string src = "def a := 1 -- conjecture\n/- block /- nested -/ conjecture -/ \"conjecture\" 'c'";
  const auto segs = lean::segment(src);
  ASSERT_GE(segs.size(), 4u);
  EXPECT_EQ(segs.front().kind, lean::SegmentKind::Code);
  bool saw_line = false, saw_block = false, saw_string = false, saw_char = false;
  for (const auto& s : segs) {
    saw_line |= s.kind == lean::SegmentKind::LineComment;
    saw_block |= s.kind == lean::SegmentKind::BlockComment;
    saw_string |= s.kind == lean::SegmentKind::String;
    saw_char |= s.kind == lean::SegmentKind::Char;
  }
  EXPECT_TRUE(saw_line && saw_block && saw_string && saw_char);
  EXPECT_FALSE(lean::contains_identifier(src, "conjecture"));
}

TEST(LeanText, IdentifierHeadsAndFieldAccess) {
  EXPECT_TRUE(lean::contains_identifier("theorem t : conjecture.Prime := sorry", "conjecture"));
  EXPECT_FALSE(lean::contains_identifier("theorem t : x.conjecture = 1 := sorry", "conjecture"));
  EXPECT_FALSE(lean::contains_identifier("theorem t : conjecture_model = 1 := sorry", "conjecture"));
  EXPECT_TRUE(lean::contains_identifier("(conjecture n)", "conjecture"));
  EXPECT_TRUE(lean::contains_identifier("∀ n, conjecture n ↔ True", "conjecture"));
}

TEST(LeanText, RenameKeepsSuffixCommentsAndStrings) {
  const std::string src = "abbrev conjecture : ℕ := 1 -- conjecture\n#eval \"conjecture\"\nexample : conjecture.succ = 2";
  const auto out = lean::rename_identifier(src, "conjecture", "conjecture_gold");
  EXPECT_EQ(out,
            "abbrev conjecture_gold : ℕ := 1 -- conjecture\n#eval \"conjecture\"\nexample : conjecture_gold.succ = 2");
}

TEST(LeanText, TopLevelDeclarations) {
  const std::string src =
      "noncomputable abbrev conjecture : ℝ := 1\n\n@[simp]\ntheorem foo (n : ℕ) : n = n := rfl\n  def inner := 3\nexample : True := trivial\n";
  const auto decls = lean::top_level_declarations(src);
  ASSERT_EQ(decls.size(), 3u);
  EXPECT_EQ(decls[0].keyword, "abbrev");
  EXPECT_EQ(decls[0].name, "conjecture");
  EXPECT_EQ(decls[0].begin, 0u);
  EXPECT_EQ(decls[1].keyword, "theorem");
  EXPECT_EQ(decls[1].name, "foo");
  EXPECT_EQ(decls[2].keyword, "example");
  EXPECT_EQ(decls[2].name, "");
}

TEST(LeanText, TypeAscriptionAndBody) {
  EXPECT_EQ(lean::type_ascription("abbrev conjecture : Set ℝ := {0, 4}"), "Set ℝ");
  EXPECT_EQ(lean::declaration_body("abbrev conjecture : Set ℝ := {0, 4}"), "{0, 4}");
  EXPECT_EQ(lean::type_ascription("abbrev conjecture : ℕ → ℕ := fun n ↦ n"), "ℕ → ℕ");
  EXPECT_EQ(lean::declaration_body("abbrev conjecture : ℕ → ℕ := fun n ↦ n"), "fun n ↦ n");
  EXPECT_EQ(lean::type_ascription("abbrev conjecture : Prop := True"), "Prop");
  EXPECT_FALSE(lean::declaration_body("axiom x : ℕ").has_value());
}

TEST(LeanText, WhitespaceHelpers) {
  EXPECT_EQ(lean::trim("  \n a b \t\n"), "a b");
  EXPECT_EQ(lean::normalize_whitespace("  a\n\n  b\tc  "), "a b c");
  EXPECT_EQ(lean::normalize_whitespace(""), "");
}

}  // namespace
}  // namespace conjbench
