#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace finsler::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;

/// Runs `finsler-verify` with argv-style arguments (args[0] is the program
/// name).  Reports go to `out` unless --output names a file; diagnostics go
/// to `err`.  Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace finsler::cli
