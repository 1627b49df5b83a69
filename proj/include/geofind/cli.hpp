// Command-line front end.
#pragma once

#include <iosfwd>

namespace geofind {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitParse = 2,
  kExitDegenerate = 3,
  kExitSoundness = 4,
};

/// Runs one CLI invocation. Reports go to `out`, diagnostics to `err`.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace geofind
