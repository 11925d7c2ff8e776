#pragma once

#include <ostream>

namespace swapfw {

/// Entry point of the `swapfw` tool: train, predict and benchmark
/// subcommands. Returns the process exit code (0 or 1).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace swapfw
