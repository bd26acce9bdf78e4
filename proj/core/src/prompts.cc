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

#include <filesystem>
#include <vector>

#include "json.hpp"
#include "xadl/errors.hpp"
#include "xadl/io.hpp"

namespace xadl {
namespace {

#include "xadl/default_templates.inc"

// Coupled to the envelope parser in extract.cc.
constexpr std::string_view kE2eContract =
    "Output format:\n"
    "You may reason before answering, but your reply must end with exactly one "
    "JSON object of this form and nothing after it:\n"
    "{\"activity\": \"<one label from the candidate list>\", "
    "\"explanation\": \"<the explanation for the resident>\", "
    "\"reasoning\": \"<your step-by-step reasoning>\"}";

constexpr std::string_view kExplainerContract =
    "Output format:\n"
    "Reply with exactly one JSON object of this form and nothing after it:\n"
    "{\"explanation\": \"<the explanation for the resident>\"}";

void RequireProfile(const HomeProfile& profile, bool need_text) {
  if (profile.activities.empty()) throw EmptyActivitySet("the home profile lists no activities");
  if (need_text && (profile.layout.empty() || profile.sensing.empty())) {
    throw InvalidParameters("home profile layout and sensing descriptions must be non-empty");
  }
}

}  // namespace

HomeProfile HomeProfile::FromJson(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaViolation(std::string("profile is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw SchemaViolation("profile must be a JSON object");
  HomeProfile p;
  try {
    p.layout = doc.value("layout", "");
    p.sensing = doc.value("sensing", "");
    p.activities = ActivitySet(doc.value("activities", std::vector<std::string>{}));
  } catch (const nlohmann::json::exception& e) {
    throw SchemaViolation(std::string("malformed profile: ") + e.what());
  }
  return p;
}

HomeProfile HomeProfile::Load(const std::string& path) { return FromJson(ReadFile(path)); }

std::string HomeProfile::ToJson() const {
  nlohmann::ordered_json doc;
  doc["layout"] = layout;
  doc["sensing"] = sensing;
  doc["activities"] = activities.labels();
  return doc.dump(2) + "\n";
}

TemplateSet TemplateSet::Defaults() {
  return {"v1", std::string(k_e2e_system), std::string(k_e2e_user),
          std::string(k_explainer_system), std::string(k_explainer_user)};
}

TemplateSet TemplateSet::FromDirectory(const std::string& dir, std::string version) {
  const auto read = [&](const char* name) {
    const auto path = std::filesystem::path(dir) / (std::string(name) + ".txt");
    if (!std::filesystem::exists(path)) throw TemplateError("missing template " + path.string());
    return ReadFile(path.string());
  };
  return {std::move(version), read("e2e_system"), read("e2e_user"), read("explainer_system"),
          read("explainer_user")};
}

std::string ExpandTemplate(std::string_view tmpl,
                           const std::map<std::string, std::string, std::less<>>& values) {
  std::string out;
  out.reserve(tmpl.size());
  std::size_t pos = 0;
  while (true) {
    const std::size_t open = tmpl.find("{{", pos);
    if (open == std::string_view::npos) {
      out.append(tmpl.substr(pos));
      break;
    }
    const std::size_t close = tmpl.find("}}", open + 2);
    if (close == std::string_view::npos) throw TemplateError("unterminated placeholder");
    const std::string_view name = tmpl.substr(open + 2, close - open - 2);
    auto it = values.find(name);
    if (it == values.end()) {
      throw TemplateError("no value for placeholder {{" + std::string(name) + "}}");
    }
    out.append(tmpl.substr(pos, open - pos));
    out.append(it->second);
    pos = close + 2;
  }
  return out;
}

std::size_t EstimateTokens(std::string_view text) { return (text.size() + 3) / 4; }

std::string RenderActivityList(const ActivitySet& activities) {
  std::string out;
  for (std::size_t i = 0; i < activities.size(); ++i) {
    if (i > 0) out += '\n';
    out += "- " + activities.labels()[i];
  }
  return out;
}

PromptBuilder::PromptBuilder(TemplateSet templates, std::size_t max_prompt_tokens)
    : templates_(std::move(templates)), max_prompt_tokens_(max_prompt_tokens) {
  if (templates_.explainer_system.find(kNoUnsupportedInferences) == std::string::npos ||
      templates_.explainer_system.find(kNonExpertAudience) == std::string::npos) {
    throw TemplateError(
        "explainer system template must keep the no-unsupported-inferences and "
        "non-expert audience instructions");
  }
}

std::string PromptBuilder::Checked(std::string prompt) const {
  const std::size_t tokens = EstimateTokens(prompt);
  if (tokens > max_prompt_tokens_) {
    throw PromptTooLong("prompt needs ~" + std::to_string(tokens) + " tokens, budget is " +
                        std::to_string(max_prompt_tokens_));
  }
  return prompt;
}

std::string PromptBuilder::BuildE2eSystemPrompt(const HomeProfile& profile) const {
  RequireProfile(profile, true);
  return Checked(ExpandTemplate(templates_.e2e_system,
                                {{"layout", profile.layout},
                                 {"sensing", profile.sensing},
                                 {"activities", RenderActivityList(profile.activities)},
                                 {"output_contract", std::string(kE2eContract)}}));
}

std::string PromptBuilder::BuildE2eUserPrompt(std::string_view window_json) const {
  if (window_json.empty()) throw InvalidParameters("window JSON is empty");
  return Checked(ExpandTemplate(templates_.e2e_user, {{"window_json", std::string(window_json)}}));
}

std::string PromptBuilder::BuildExplainerSystemPrompt(const HomeProfile& profile) const {
  RequireProfile(profile, false);
  return Checked(ExpandTemplate(templates_.explainer_system,
                                {{"layout", profile.layout},
                                 {"sensing", profile.sensing},
                                 {"activities", RenderActivityList(profile.activities)},
                                 {"output_contract", std::string(kExplainerContract)}}));
}

std::string PromptBuilder::BuildExplainerUserPrompt(std::string_view predicted,
                                                    std::string_view attrs_json,
                                                    const ActivitySet& activities) const {
  auto canonical = activities.Find(predicted);
  if (!canonical) {
    throw UnknownActivity("predicted activity '" + std::string(predicted) +
                          "' is not a candidate activity");
  }
  return Checked(ExpandTemplate(templates_.explainer_user,
                                {{"predicted_activity", *canonical},
                                 {"attributions_json", std::string(attrs_json)}}));
}

}  // namespace xadl
