#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dickman::cli {

enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kUsage = 2,
  kResource = 3,
  kVerifyFailed = 4,
  kOutOfRange = 5,
  kNumerical = 6,
};

// Parses and runs one command line. Results go to `out` (or the --output
// file), diagnostics to `err` as a single line.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dickman::cli
