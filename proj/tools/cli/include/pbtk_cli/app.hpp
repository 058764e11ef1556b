#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pbtk::cli {

enum ExitCode : int { kSuccess = 0, kDomainError = 1, kUsageError = 2 };

/// Entry point of the `pbtk` tool. `args` excludes the program name.
int run_app(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pbtk::cli
