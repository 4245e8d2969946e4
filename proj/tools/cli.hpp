#pragma once

#include <ostream>

namespace reqc::cli {

/// Exit codes: 0 success, 1 analysis findings, 2 usage or I/O errors.
enum Exit { kOk = 0, kFindings = 1, kUsage = 2 };

/// Entry point of the `reqc` tool, usable in-process. argv[0] is the program
/// name. Output goes to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace reqc::cli
