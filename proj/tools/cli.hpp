#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace aclab::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitDomain = 2;     // parameter outside a module's domain, unresolved kappa, non-odd input
inline constexpr int kExitNumerical = 3;  // solver, quadrature, blow-up or fit-window failure
inline constexpr int kExitIo = 4;         // output directory or file not writable
inline constexpr int kExitUsage = 64;

/// Parses `args` (without the program name) and runs one subcommand.
/// Human-readable output goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace aclab::cli
