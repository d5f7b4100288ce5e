#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace blowup::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,    // bad flags, unreadable or malformed input
  kNumeric = 2,  // domain or numeric failure, failed validation, early stop
  kInconclusive = 3,
};

/// Runs one command line. args[0] is the program name. Regular output goes to
/// `out` unless --output redirects it; messages go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace blowup::cli
