#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace itime::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

inline constexpr const char* kOutputDirEnv = "ITIME_OUTPUT_DIR";

/// Runs one command line (arguments after the program name).
/// Returns 0 on success, 1 on a runtime failure, 2 on a usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Reads "key = value" lines ('#' comments, blank lines ignored) and returns
/// them as "--key=value" arguments.
std::vector<std::string> read_config_args(const std::string& path);

} // namespace itime::cli
