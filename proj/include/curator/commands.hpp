#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace curator {

/// Exit codes of the command-line front end.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitInput = 2;

/// Runs one command line (program name first). Normal output goes to `out`,
/// warnings and errors to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace curator
