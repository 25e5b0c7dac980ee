#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace popa::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;
inline constexpr int kExitInput = 2;

/// Runs one subcommand. `args` excludes the program name. The JSON report goes
/// to --output or `out`; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace popa::cli
