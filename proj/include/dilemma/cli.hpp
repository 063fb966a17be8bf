#pragma once

/// @file cli.hpp
/// Command-line front end. `run` never throws; failures map to exit codes.

#include <iosfwd>
#include <string>
#include <vector>

namespace dilemma::cli {

enum ExitCode : int {
  kOk = 0,
  kInvalidModel = 1,
  kUsage = 2,
  kNothingFound = 3,
};

/// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace dilemma::cli
