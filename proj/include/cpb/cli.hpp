#pragma once

#include <iosfwd>

namespace cpb {

// Command-line entry point; returns the process exit status. Output goes to
// `out`, diagnostics to `err`, so tests can capture both.
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace cpb
