#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mlsn {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitInput = 2,
  kExitDataShape = 3,
};

// Entry point of the `mlsn` tool. args[0] is the program name. Errors are
// reported as one "error[<kind>] <message>" line on err.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mlsn
