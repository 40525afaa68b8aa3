// Copyright 2026 The Lexaspect Authors.
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

#ifndef LEXASPECT_CLI_HPP_
#define LEXASPECT_CLI_HPP_

#include <iosfwd>
#include <string>
#include <vector>

namespace lexaspect::cli {

inline constexpr const char* kToolName = "lexaspect";
inline constexpr const char* kToolVersion = "0.1.0";

// Runs one subcommand. args excludes the program name. Reports go to `out`
// (or the --out file); on failure a single JSON line
// {"error":"<Code>","message":"..."} goes to `err`.
//
// Returns 0 when a report was produced, 1 on a runtime error and 2 on a
// command-line usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Reads `key = value` lines; '#' starts a comment. Used for --config.
std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path);

}  // namespace lexaspect::cli

#endif  // LEXASPECT_CLI_HPP_
