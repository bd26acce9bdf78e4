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

#pragma once

#include <map>
#include <string>
#include <string_view>

#include "xadl/model.hpp"

namespace xadl {

// Per-deployment context injected into the system prompts.
struct HomeProfile {
  std::string layout;
  std::string sensing;
  ActivitySet activities;

  // {"layout": "...", "sensing": "...", "activities": ["...", ...]}
  static HomeProfile FromJson(std::string_view json_text);
  static HomeProfile Load(const std::string& path);
  std::string ToJson() const;
};

// Prompt templates with `{{name}}` placeholders.
//
// A template directory holds e2e_system.txt, e2e_user.txt,
// explainer_system.txt and explainer_user.txt.
struct TemplateSet {
  std::string version;
  std::string e2e_system;
  std::string e2e_user;
  std::string explainer_system;
  std::string explainer_user;

  // The compiled-in v1 templates.
  static TemplateSet Defaults();
  // Reads all four files from `dir`; throws TemplateError if one is missing.
  static TemplateSet FromDirectory(const std::string& dir, std::string version = "custom");
};

// Substitutes every `{{name}}`. A placeholder without a value, or an
// unterminated `{{`, throws TemplateError.
std::string ExpandTemplate(std::string_view tmpl,
                           const std::map<std::string, std::string, std::less<>>& values);

// ceil(characters / 4).
std::size_t EstimateTokens(std::string_view text);

// Sentences the explainer system prompt must carry.
inline constexpr std::string_view kNoUnsupportedInferences =
    "do not add inferences that are not directly supported by data";
inline constexpr std::string_view kNonExpertAudience = "suitable to non-expert users";

class PromptBuilder {
 public:
  explicit PromptBuilder(TemplateSet templates = TemplateSet::Defaults(),
                         std::size_t max_prompt_tokens = 16000);

  std::string BuildE2eSystemPrompt(const HomeProfile& profile) const;
  std::string BuildE2eUserPrompt(std::string_view window_json) const;
  std::string BuildExplainerSystemPrompt(const HomeProfile& profile) const;
  // Throws UnknownActivity unless `predicted` is in `activities`.
  std::string BuildExplainerUserPrompt(std::string_view predicted, std::string_view attrs_json,
                                       const ActivitySet& activities) const;

  const TemplateSet& templates() const { return templates_; }

 private:
  std::string Checked(std::string prompt) const;

  TemplateSet templates_;
  std::size_t max_prompt_tokens_;
};

// The bulleted candidate list as it appears in system prompts.
std::string RenderActivityList(const ActivitySet& activities);

}  // namespace xadl
