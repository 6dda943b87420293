#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace mhdflow::cli {

enum ExitCode : int { ok = 0, verification_failed = 1, usage_error = 2, numerical_failure = 3 };

/// Runs one subcommand. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mhdflow::cli
