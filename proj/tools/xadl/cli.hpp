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

#include <ostream>
#include <string>
#include <vector>

namespace xadl::cli {

// Runs one `xadl` invocation. `args` excludes the program name. Failures
// print a single JSON line to `err` and return the exit code of their
// error category (2 usage, 3 data, 4 provider).
int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace xadl::cli
