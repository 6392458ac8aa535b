#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace runsdist {

/// Exit codes of run_cli.
enum ExitCode : int {
  kExitOk = 0,
  kExitCompareFailed = 1,
  kExitUsage = 2,
  kExitNumerical = 3,  // a numerical guard tripped (root tolerance, non-convergent tail, ...)
};

/// Runs one subcommand (pmf, moments, compare, simulate). args excludes the
/// program name. Tables go to out, diagnostics to err.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace runsdist
