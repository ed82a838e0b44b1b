#pragma once

#include <iosfwd>

namespace bidir::cli {

enum ExitCode { kOk = 0, kTypeError = 1, kParseError = 2, kInvariantViolation = 3 };

/// Runs the command line `argv`. Results go to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace bidir::cli
