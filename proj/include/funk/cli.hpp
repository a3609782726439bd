#pragma once

#include <iosfwd>

namespace funk {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitVerifyFailed = 1,
  kExitUsage = 2,
  kExitCompute = 3,
};

/// Runs `funk <command> [flags]` with output and diagnostics on the given streams.
/// Commands: forward, invert, coeffs, verify, convergence. A `--config file`
/// of key=value lines supplies flags not given on the command line.
/// FUNK_THREADS sets the worker thread count.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace funk
