#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rr::cli {

enum ExitCode { kOk = 0, kDiagnostics = 1, kUsage = 2, kIo = 3 };

// Entry point behind the `rr` tool; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rr::cli
