#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rdclass {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,     // bad flags, invalid instance, oracle refusal
  kExitIo = 2,        // unreadable input or unwritable output
  kExitVerifyFailed = 3,
};

/// Runs the command line `args` (program name excluded). Regular output
/// goes to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rdclass
