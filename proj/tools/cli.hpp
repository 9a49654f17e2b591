/* Copyright 2026 The Rewriter Authors. All Rights Reserved.

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

#ifndef REWRITER_TOOLS_CLI_HPP_
#define REWRITER_TOOLS_CLI_HPP_

#include <iosfwd>
#include <string>
#include <vector>

namespace rewriter::cli {

// Exit codes shared by every subcommand.
enum ExitCode : int {
  kOk = 0,
  kFailure = 1,           // malformed input files and other errors
  kUsage = 2,             // bad flags, missing files, mismatched inputs
  kDegenerateTheme = 3,
  kEmptyCandidates = 4,
};

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rewriter::cli

#endif  // REWRITER_TOOLS_CLI_HPP_
