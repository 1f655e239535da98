#pragma once

#include <iosfwd>

namespace mk::cli {

enum ExitCode : int { kOk = 0, kIdentityFailure = 1, kParseError = 2, kNumericalError = 3 };

/// Entry point of the `metallic` tool. Writes the report to `out` and
/// diagnostics to `err`; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mk::cli
