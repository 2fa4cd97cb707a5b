#pragma once

#include <iosfwd>

namespace spinmf::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitUsage = 2,
  kExitNumeric = 3,
  kExitDegenerate = 4,
};

/// Entry point of the `spinmf` command; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace spinmf::cli
