#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace kmbias {

/// Runs the command-line tool on `args` (program name excluded),
/// writing normal output to `out` and diagnostics to `err`.
/// Exit codes: 0 success, 1 runtime failure (I/O, estimation, or a
/// reproduction outside tolerance), 2 usage error.
int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace kmbias
