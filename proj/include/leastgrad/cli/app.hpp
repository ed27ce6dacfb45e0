#pragma once

#include <ostream>

namespace leastgrad::cli {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kOk = 0,
  kValidationError = 1,  // bad flags, config, input files, gallery regression
  kNumericalError = 2,
  kNotConverged = 3,
};

/// Runs the tool. Normal output goes to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace leastgrad::cli
