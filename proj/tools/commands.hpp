#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace wgslr::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kData = 3, kNumeric = 4 };

/// Runs `wgslr <args...>`; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace wgslr::cli
