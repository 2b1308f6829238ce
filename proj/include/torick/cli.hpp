#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace torick
{

/// Exit codes of the command-line front end.
enum ExitCode : int {
    kExitOk = 0,
    kExitVerificationFailed = 1,
    kExitInputError = 2,
    kExitNumericError = 3,
};

/**
 * Runs one torick invocation. args excludes the program name. Reports go to
 * out (or to --output), machine-readable errors to err.
 */
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace torick
