#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace npvi::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

/**
 * Entry point of the `npvi` tool. args[0] is the program name, args[1] the
 * subcommand (fit, density-grid, compare, synth-data). Diagnostics go to
 * `err`; results are written under --out.
 */
int run(const std::vector<std::string>& args, std::ostream& err);

}  // namespace npvi::cli
