#pragma once

#include <iosfwd>

namespace greenlab::cli {

// Exit codes of the greenlab tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitUnexpected = 1,
  kExitConfig = 2,
  kExitSingularity = 3,
  kExitNumerical = 4,
  kExitVerification = 5,
};

/// Entry point of the tool with injectable streams.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace greenlab::cli
