#pragma once

#include <string>
#include <vector>

namespace blf::cli {

// Runs one CLI invocation (arguments exclude the program name). Returns the
// process exit code: 0 on success, 1 on numerical failure, 2 on
// parameter-range violations.
int run_command(const std::vector<std::string>& args);

}  // namespace blf::cli
