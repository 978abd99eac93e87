#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bdlab {

/// Exit codes of the command-line front end.
enum ExitCode : int {
  kExitOk = 0,
  kExitVerificationFailed = 1,
  kExitUsage = 2,
  kExitResource = 3,
};

/// Runs the command line `args` (args[0] is the program name). JSON goes to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace bdlab
