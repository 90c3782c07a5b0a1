#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gapinfo::cli {

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kVerificationFailed = 2,
  kInfeasible = 3,
};

/// Runs one command line. args[0] is the program name. Never throws.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gapinfo::cli
