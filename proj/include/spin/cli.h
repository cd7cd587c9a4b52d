// Copyright 2026 The SPIN Summarization Authors.
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

#ifndef SPIN_CLI_H_
#define SPIN_CLI_H_

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace spin {

inline constexpr std::string_view kVersion = "0.1.0";

// Exit statuses.
inline constexpr int kExitOk = 0;
inline constexpr int kExitDataError = 1;
inline constexpr int kExitUsageError = 2;

// Entry point of the `spin` executable. argv[0] is the program name.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

// Expands `--config <file.json>`: every top-level key becomes `--<key>`
// unless that flag is already on the command line. Booleans add a bare
// flag when true; arrays repeat the flag. Throws std::invalid_argument.
std::vector<std::string> ApplyConfigOverlay(std::vector<std::string> args);

}  // namespace spin

#endif  // SPIN_CLI_H_
