#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tunnelkit::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kNonConvergence = 3 };

/// Runs one `tunnelkit` invocation. `args` excludes the program name. Data
/// goes to `out` unless --out names a file; diagnostics go to `err`.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tunnelkit::cli
