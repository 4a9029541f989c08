#pragma once

#include <iosfwd>

namespace eeq {

/// Exit codes of the command-line front end.
enum ExitCode : int { kExitOk = 0, kExitConfigError = 1, kExitInfeasible = 2 };

/// Entry point shared by the eeq binary and the tests. CSV goes to --out when
/// given (with a short summary on out), otherwise to out.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace eeq
