#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace asslkit::cli {

enum ExitCode { kOk = 0, kNegative = 1, kUsage = 2, kInternal = 3 };

/// Runs one `asslkit` invocation; `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace asslkit::cli
