#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace arboreal::cli {

enum ExitCode : int { kOk = 0, kInvalidInput = 2, kWorkLimit = 3, kFalsified = 4 };

/// args excludes the program name. Reports go to out, diagnostics to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace arboreal::cli
