#pragma once

#include <iosfwd>

namespace spinsq::cli {

/// Exit codes: 0 success, 1 verification failure, 2 usage / input / output error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitUsage = 2;

/// Whole command line, with `argv[0]` the program name. Never throws.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace spinsq::cli
