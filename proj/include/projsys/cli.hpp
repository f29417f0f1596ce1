#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace projsys::cli {

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kInputError = 1,     ///< parse, validation or I/O failure
  kNonProjective = 2,  ///< `classify` found none of the three patterns
  kDegenerate = 3,     ///< `analyze ex3` hit the degenerate boundary
};

/// Runs the command line (args excludes the program name) and returns the
/// exit code. Normal output goes to out, diagnostics to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace projsys::cli
