#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace storygame::cli {

/// Exit codes: 0 success, 1 domain error, 2 usage error.
enum ExitCode : int { kOk = 0, kDomainError = 1, kUsageError = 2 };

/// Runs one subcommand. `args` excludes the program name. Results go to
/// `out` (or the --output file), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace storygame::cli
