#pragma once

#include <string>
#include <vector>

namespace cml {

// Dispatches one CLI invocation. Returns the process exit code: 0 when the
// emitted certificate passed, 1 when a construction or certification failed,
// 2 for unusable input (bad flags, malformed files, precondition violations).
int run_subcommand(const std::vector<std::string>& args);

}  // namespace cml
