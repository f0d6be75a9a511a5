#pragma once

// Command-line front end. All logic sits behind run() so tests can drive it
// without spawning processes.

#include <iosfwd>
#include <string>

#include "qmetro/errors.hpp"

namespace qmetro::cli {

enum ExitCode : int {
  exit_ok = 0,
  exit_failure = 1,        // I/O and anything unexpected
  exit_usage = 2,          // bad flags, domain, dimension or constraint errors
  exit_resource = 3,       // dimension / Kraus caps
  exit_not_converged = 4,  // results written, but a solver stopped early
};

int exit_code_for(ErrorKind kind);

// %.17g
std::string format_number(double x);

// Subcommands: qfi, bound, fig3, fig4. Data goes to `out` (or --out),
// diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qmetro::cli
