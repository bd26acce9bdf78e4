// Copyright 2026 The xadl Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "xadl/prompts.hpp"

#include <gtest/gtest.h>

#include <filesystem>

#include "xadl/errors.hpp"
#include "xadl/io.hpp"

namespace xadl {
namespace {

HomeProfile Profile() {
  HomeProfile p;
  p.layout = "A flat with a kitchen, a living room and a bedroom.";
  p.sensing = "Magnetic sensors on doors, smart plugs on appliances.";
  p.activities = ActivitySet({"eating", "watching tv", "taking medicines"});
  return p;
}

TEST(ExpandTemplateTest, SubstitutesAndRejects) {
  EXPECT_EQ(ExpandTemplate("a {{x}} b {{y}}", {{"x", "1"}, {"y", "2"}}), "a 1 b 2");
  EXPECT_THROW(ExpandTemplate("{{missing}}", {}), TemplateError);
  EXPECT_THROW(ExpandTemplate("{{open", {{"open", ""}}), TemplateError);
  EXPECT_EQ(ExpandTemplate("no placeholders", {}), "no placeholders");
}

TEST(EstimateTokensTest, CeilOfQuarterChars) {
  EXPECT_EQ(EstimateTokens(""), 0u);
  EXPECT_EQ(EstimateTokens("abcd"), 1u);
  EXPECT_EQ(EstimateTokens("abcde"), 2u);
}

TEST(PromptBuilderTest, E2eSystemPromptCarriesContext) {
  const PromptBuilder b;
  const std::string s = b.BuildE2eSystemPrompt(Profile());
  EXPECT_NE(s.find("A flat with a kitchen"), std::string::npos);
  EXPECT_NE(s.find("Magnetic sensors"), std::string::npos);
  EXPECT_NE(s.find("- eating\n- watching tv\n- taking medicines"), std::string::npos);
  EXPECT_NE(s.find("\"activity\""), std::string::npos);
  EXPECT_NE(s.find("\"explanation\""), std::string::npos);
  EXPECT_EQ(s.find("{{"), std::string::npos);
  // Role first, output contract last.
  EXPECT_LT(s.find("smart home"), s.find("Candidate activities"));
  EXPECT_LT(s.find("Candidate activities"), s.find("\"activity\""));
}

TEST(PromptBuilderTest, E2eUserPromptEmbedsWindowAndSteps) {
  const PromptBuilder b;
  const std::string u = b.BuildE2eUserPrompt("{\n  \"Time window\": [\"15:20:00\", \"15:40:00\"]\n}\n");
  EXPECT_NE(u.find("\"Time window\": [\"15:20:00\", \"15:40:00\"]"), std::string::npos);
  EXPECT_NE(u.find("step by step"), std::string::npos);
}

TEST(PromptBuilderTest, ExplainerPromptsCarryConstraints) {
  const PromptBuilder b;
  const std::string s = b.BuildExplainerSystemPrompt(Profile());
  EXPECT_NE(s.find(kNoUnsupportedInferences), std::string::npos);
  EXPECT_NE(s.find(kNonExpertAudience), std::string::npos);
  const std::string u = b.BuildExplainerUserPrompt("Eating", "{}", Profile().activities);
  EXPECT_NE(u.find("Predicted activity: eating"), std::string::npos);
  EXPECT_THROW(b.BuildExplainerUserPrompt("cooking", "{}", Profile().activities), UnknownActivity);
}

TEST(PromptBuilderTest, ProfileErrors) {
  const PromptBuilder b;
  HomeProfile p = Profile();
  p.activities = ActivitySet();
  EXPECT_THROW(b.BuildE2eSystemPrompt(p), EmptyActivitySet);
  p = Profile();
  p.layout.clear();
  EXPECT_THROW(b.BuildE2eSystemPrompt(p), InvalidParameters);
}

TEST(PromptBuilderTest, BudgetEnforced) {
  const PromptBuilder b(TemplateSet::Defaults(), 50);
  EXPECT_THROW(b.BuildE2eSystemPrompt(Profile()), PromptTooLong);
}

TEST(PromptBuilderTest, ExplainerTemplateMustKeepConstraints) {
  TemplateSet t = TemplateSet::Defaults();
  t.explainer_system = "Explain {{activities}} {{layout}} {{sensing}} {{output_contract}}";
  EXPECT_THROW(PromptBuilder{t}, TemplateError);
}

TEST(TemplateSetTest, FromDirectory) {
  const auto dir = std::filesystem::temp_directory_path() / "xadl_prompts_test";
  std::filesystem::remove_all(dir);
  const TemplateSet d = TemplateSet::Defaults();
  EXPECT_EQ(d.version, "v1");
  WriteFileAtomic((dir / "e2e_system.txt").string(), d.e2e_system);
  WriteFileAtomic((dir / "e2e_user.txt").string(), "WINDOW {{window_json}}");
  WriteFileAtomic((dir / "explainer_system.txt").string(), d.explainer_system);
  EXPECT_THROW(TemplateSet::FromDirectory(dir.string()), TemplateError);
  WriteFileAtomic((dir / "explainer_user.txt").string(), d.explainer_user);
  const TemplateSet t = TemplateSet::FromDirectory(dir.string());
  EXPECT_EQ(PromptBuilder(t).BuildE2eUserPrompt("{}"), "WINDOW {}");
  std::filesystem::remove_all(dir);
}

TEST(HomeProfileTest, JsonRoundTrip) {
  const HomeProfile p = Profile();
  const HomeProfile q = HomeProfile::FromJson(p.ToJson());
  EXPECT_EQ(q.layout, p.layout);
  EXPECT_EQ(q.activities.labels(), p.activities.labels());
  EXPECT_THROW(HomeProfile::FromJson("[1]"), SchemaViolation);
}

}  // namespace
}  // namespace xadl
