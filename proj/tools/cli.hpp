#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace asbench::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitInvalidInput = 2;

/// Runs one command line (args excludes the program name). Machine-readable
/// results go to `out`; the resolved configuration, warnings and errors go to
/// `err` as '#'-prefixed lines.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace asbench::cli
