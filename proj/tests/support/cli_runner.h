// Runs the built command-line tool.
#pragma once

#include <string>

namespace cryptoslice::testing {

struct CliResult {
  int exitCode = -1;
  std::string out;
};

// Runs the built CLI with `args`; stderr is discarded.
CliResult runCli(const std::string &args);

} // namespace cryptoslice::testing
