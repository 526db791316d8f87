#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hetalign::cli {

/// Exit statuses shared by every subcommand.
enum ExitCode : int {
    kOk = 0,
    kIoFailure = 1,
    kValidation = 2,
    kDeterminism = 3,
};

/// Runs one invocation. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hetalign::cli
