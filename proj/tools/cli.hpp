#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lastrec::cli {

/// Runs the command-line front end. args excludes the program name.
/// Writes results to out (JSON by default, CSV for tabular commands) and
/// diagnostics to err. Exit codes: 0 success, 2 usage error, 1 numerical
/// failure.
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace lastrec::cli
