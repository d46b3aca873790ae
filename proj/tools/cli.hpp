#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace fcast::cli {

enum ExitCode : int { success = 0, usage_error = 1, data_error = 2, computation_error = 3 };

/// Runs the command line `args` (without the program name) in-process.
/// Written file paths go to `out`; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fcast::cli
