#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace framekit::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRefuted = 1;
inline constexpr int kExitInput = 2;

/// Runs one command. `args` excludes the program name. The report goes to the
/// --out file when given and to `out` otherwise; diagnostics go to `err`.
/// Returns 0 on success, 1 on a refutation or prediction violation and 2 on
/// an input error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace framekit::cli
