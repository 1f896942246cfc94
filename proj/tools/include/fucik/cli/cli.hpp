#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fucik::cli {

enum ExitCode : int { kSuccess = 0, kUsage = 2, kNumerical = 3 };

/// Runs the `fucik` tool on `args` (program name excluded). Records go to
/// `out` unless --output names a file. Failures are reported on `err` as a
/// single JSON line.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fucik::cli
