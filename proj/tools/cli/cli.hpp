#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace shuttle::cli {

/// Prefix of the environment variables that stand in for missing flags:
/// SHUTTLE_CONFIG, SHUTTLE_OUT, SHUTTLE_SEED, SHUTTLE_THREADS.
inline constexpr const char* kEnvPrefix = "SHUTTLE_";

/// Runs one job and returns the process exit code: 0 ok, 2 config error,
/// 3 escape, 4 numerical-quality error, 1 anything unexpected.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Same, with args excluding the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace shuttle::cli
