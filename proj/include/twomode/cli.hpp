// Copyright 2026 The twomode Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TWOMODE_CLI_HPP
#define TWOMODE_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace twomode::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitParameterError = 2;
inline constexpr int kExitInputError = 3;

inline constexpr const char* kToleranceEnv = "TWOMODE_TOLERANCE";
inline constexpr const char* kVersion = "1.0.0";

/// Runs one invocation; `args` excludes the program name. Data goes to the
/// --out file (summary to `out`) or to `out` (summary to `err`).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace twomode::cli

#endif  // TWOMODE_CLI_HPP
