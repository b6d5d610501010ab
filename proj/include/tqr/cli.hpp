#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tqr {

/// Exit codes of the tqrlab tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitSuiteFailure = 1,
  kExitNumerical = 2,
  kExitParse = 3,
  kExitCalibration = 4,
};

/// Runs one tqrlab invocation; `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tqr
