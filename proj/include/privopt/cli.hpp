//
// Copyright 2026 The privopt Authors
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
//

#ifndef PRIVOPT_CLI_HPP_
#define PRIVOPT_CLI_HPP_

#include <ostream>
#include <string>
#include <vector>

namespace privopt::cli {

// Exit statuses.
inline constexpr int kOk = 0;
inline constexpr int kUsageError = 1;
inline constexpr int kVerificationFailed = 2;

/**
 * Runs one command line (without the program name). Artifacts go to --out
 * or, when absent, to `out`; progress and summaries go to `err`.
 *
 * Subcommands: mech geometric, optimal, remap, analyze, verify {theorem1,
 * factorization, uniqueness}, nonoblivious {counterexample, obliviate},
 * compare-laplace.
 */
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace privopt::cli

#endif  // PRIVOPT_CLI_HPP_
