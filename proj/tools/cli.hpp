// SPDX-FileCopyrightText: 2026 fracbranch authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace fracbranch::cli {

/// Exit codes of the command-line front end.
enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 1,
  kInvalidInput = 2,
  kNumericalFailure = 3,
  kUnwritableOutput = 4,
};

/// Runs one command. args excludes the program name. CSV goes to `out`
/// unless --output names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fracbranch::cli
