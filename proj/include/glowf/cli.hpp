#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace glowf::cli {

enum ExitCode : int { kSuccess = 0, kNegative = 1, kUsage = 2, kBudget = 3 };

/// Runs one command line; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace glowf::cli
