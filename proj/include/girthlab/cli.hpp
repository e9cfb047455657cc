#pragma once

#include <iosfwd>

namespace girthlab::cli {

/// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kUsage = 1;
inline constexpr int kBudget = 2;
inline constexpr int kVerification = 3;

/// Parses argv (argv[0] is the program name) and dispatches one subcommand.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace girthlab::cli
