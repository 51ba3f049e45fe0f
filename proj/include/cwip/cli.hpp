#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cwip::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_verification_failed = 1;
inline constexpr int exit_usage = 2;

/// Subcommands: sample, sweep, verify-colouring, verify-twist,
/// xcheck-quantum, gw, report.
int run(int argc, const char* const* argv);

/// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cwip::cli
