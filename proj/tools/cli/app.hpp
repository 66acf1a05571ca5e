#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace snts::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitUsage = 2,
  kExitParse = 3,
  kExitInvalid = 4,
  kExitInfeasible = 5,
  kExitDegenerate = 6,
  kExitIo = 7,
};

/// Runs one command line. `args` excludes the program name. Reports go to
/// `out` (or the --out file), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Library version string recorded in every report.
[[nodiscard]] const char* version() noexcept;

}  // namespace snts::cli
