// Copyright 2026 The eegpipe Authors.
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

#ifndef EEGPIPE_CLI_H_
#define EEGPIPE_CLI_H_

#include <ostream>
#include <string>
#include <vector>

#include "absl/status/status.h"

namespace eegpipe {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitDataError = 2;
inline constexpr int kExitNumericFailure = 3;

// Internal errors come from non-finite numerics; everything else is a data
// error.
int ExitCodeFor(const absl::Status& status);

// Runs the command line `args` (args[0] is the program name). Every flag
// --some-flag falls back to the environment variable EEGPIPE_SOME_FLAG.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

}  // namespace eegpipe

#endif  // EEGPIPE_CLI_H_
