// Copyright 2026 The xlmimo Authors
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

#include <stdexcept>
#include <string>

namespace xlmimo {

inline constexpr const char* kToolVersion = "1.0.0";

/// Configuration rejection; the CLI maps it to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Full command-line entry point (subcommands corr | se | outage | compare |
/// delta-map).  Returns the process exit code: 0 success, 2 configuration
/// error, 3 numerical non-convergence.
int run_cli(int argc, const char* const* argv);

}  // namespace xlmimo
