#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ldopt::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitNumerical = 2;

/// Runs one command. `args` excludes the program name. Results go to `out`
/// as a single JSON document (or a text summary with --pretty); diagnostics
/// go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ldopt::cli
