#pragma once

#include <iosfwd>

namespace mixsat {

// Entry point for the mixsat executable. Subcommands: solve, generate, bench.
// Exit codes: 0 success, 2 usage, input or parse errors.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mixsat
