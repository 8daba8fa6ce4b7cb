/* Copyright 2026 The segcrf Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef SEGCRF_CLI_HPP_
#define SEGCRF_CLI_HPP_

#include <iosfwd>
#include <string>
#include <vector>

namespace segcrf::cli {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitNumerical = 3;

// Environment variable naming a default JSON config file. Individual keys can
// also be overridden with SEGCRF_<KEY> (e.g. SEGCRF_EPOCHS=1); flags win over
// both.
inline constexpr const char* kConfigEnv = "SEGCRF_CONFIG";

// Runs `segcrf <subcommand> ...` with args excluding the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace segcrf::cli

#endif  // SEGCRF_CLI_HPP_
