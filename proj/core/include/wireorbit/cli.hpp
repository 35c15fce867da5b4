#pragma once
#include <iosfwd>
#include <string>
#include <vector>

namespace wireorbit::cli {

// one exit code per failure class
inline constexpr int exit_ok = 0;
inline constexpr int exit_check_failed = 1;  ///< a verification report failed
inline constexpr int exit_usage = 2;         ///< unknown subcommand or flags
inline constexpr int exit_bad_config = 3;    ///< malformed config or bad values
inline constexpr int exit_missing_file = 4;  ///< referenced file does not exist
inline constexpr int exit_numerical = 5;     ///< numerical failure at runtime

/// Dispatches one subcommand. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace wireorbit::cli
