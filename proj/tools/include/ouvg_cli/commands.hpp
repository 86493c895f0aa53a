#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ouvg::cli {

enum ExitCode : int { kOk = 0, kValidation = 2, kNumerical = 3 };

/// Runs one invocation, args excluding the program name. Results go to --out
/// files when given and to `out` otherwise; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Parameters accepted by `ouvg sensitivity --param`.
const std::vector<std::string>& sensitivity_parameters();

/// "a,b,c" or "lo:hi:step" (inclusive).
std::vector<double> parse_grid(const std::string& text);

}  // namespace ouvg::cli
