#pragma once

// The hq command line as a library call, so tests can drive it in-process.

#include <iosfwd>
#include <string>
#include <vector>

namespace hq::cli {

inline constexpr const char* kSchema = "hq/1";

enum ExitCode : int { kSuccess = 0, kFailure = 1, kUsage = 2 };

/// Runs one command; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hq::cli
