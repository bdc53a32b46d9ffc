#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cbf::cli {

enum ExitCode : int {
    kSuccess = 0,
    kConfigError = 2,
    kNumericalError = 3,
    kValidationFailure = 4,
};

/// Runs the command line `args` (without the program name). Diagnostics go to `err`, summaries
/// and reports to `out`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cbf::cli
