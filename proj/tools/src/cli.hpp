#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nodal::cli {

enum ExitCode : int { kOk = 0, kValidation = 1, kNumerical = 2 };

/// Runs the command line `args` (args[0] is the program name). Results go to
/// `out` unless --output names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Default solver tolerance, honouring NODAL_TOL. Throws DomainError when the
/// variable is set but not a positive number.
double default_tolerance();

}  // namespace nodal::cli
