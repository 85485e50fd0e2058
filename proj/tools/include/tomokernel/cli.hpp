#pragma once

#include <iosfwd>

namespace tomokernel::cli {

enum ExitCode : int {
  kSuccess = 0,
  kInputError = 2,
  kVerificationFailure = 3,
  kNonConvergence = 4,
};

// Entry point of the `tomokernel` command. argv[0] is the program name.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tomokernel::cli
