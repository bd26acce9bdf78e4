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

#include <string>
#include <string_view>

namespace xadl {

// Lowercase hex SHA-256.
std::string Sha256Hex(std::string_view data);

// Fingerprint of a (system, user) prompt pair.
std::string PromptFingerprint(std::string_view system, std::string_view user);

}  // namespace xadl
