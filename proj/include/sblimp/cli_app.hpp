#pragma once

namespace sblimp {

// Command-line entry point. Subcommands: simulate, sweep, verify.
// Exit codes: 0 = stable run / all checks pass, 2 = diverged run,
// 3 = configuration error, 4 = verification failure.
int run_cli(int argc, const char* const* argv);

}  // namespace sblimp
