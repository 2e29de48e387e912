#pragma once

// Entry point shared by the pnmdi executable and the CLI tests.

#include <ostream>

namespace pnmdi::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitIntegrity = 3;

/// Runs one command; writes tables to `out` unless --out redirects them.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pnmdi::cli
