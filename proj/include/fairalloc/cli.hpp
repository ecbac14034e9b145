#pragma once

#include <ostream>

namespace fairalloc {

enum ExitCode : int {
  kExitOk = 0,
  kExitVerificationFailed = 1,
  kExitUsage = 2,
  kExitInternal = 3,
};

/// Entry point of the `fairalloc` command line tool:
///   gen | solve | verify | opt
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fairalloc
