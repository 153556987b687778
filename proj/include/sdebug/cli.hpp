#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sdebug {

/// Exit statuses of the command-line tool.
enum ExitCode : int { kExitClean = 0, kExitFindings = 1, kExitError = 2 };

/// Runs `sdebug <annotate|synth|check> ...`; `args` excludes the program
/// name. Never returns anything but the three exit codes.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sdebug
