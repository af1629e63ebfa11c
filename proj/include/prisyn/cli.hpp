#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace prisyn::cli {

/// Exit codes of the command-line tool.
enum Exit : int { kOk = 0, kUsage = 1, kViolation = 2, kInfeasible = 3, kGaveUp = 4 };

/// Run one command; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace prisyn::cli
