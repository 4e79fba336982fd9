#pragma once

#include <ostream>

namespace negmu {

/// Exit codes of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitValidationFailed = 1, kExitConfigError = 2 };

/// Entry point of the `negmu` tool: subcommands point, map, profile, sweep,
/// validate. Text goes to `out`, diagnostics to `err`.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace negmu
