#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace cone::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kComputation = 2 };

/// Runs one `coneperc` invocation. `args` excludes the program name.
/// The report goes to `out` (or to --output); diagnostics go to `err`.
/// Nothing is written to the report stream unless the command succeeds.
int run_command(const std::vector<std::string>& args, std::ostream& out,
                std::ostream& err);

/// Rounds to 10 significant digits, the precision used in every report.
double round_report(double v);

}  // namespace cone::cli
