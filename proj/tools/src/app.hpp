#pragma once

#include <iosfwd>

namespace esdr::cli {

/// Exit codes: success, some replicates failed, usage or data error.
enum ExitCode : int { exit_ok = 0, exit_partial = 1, exit_usage = 2 };

/// Entry point shared by the executable and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace esdr::cli
