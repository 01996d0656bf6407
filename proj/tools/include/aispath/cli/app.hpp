#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace aispath::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitConfig = 2,
  kExitData = 3,
  kExitIo = 4,
};

/// Entry point of the aispath tool; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace aispath::cli
