#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ddestab::cli {

/// Exit codes of the command-line front end.
enum ExitCode : int { kOk = 0, kUsage = 2, kNumerical = 3 };

/// Runs one invocation. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ddestab::cli
