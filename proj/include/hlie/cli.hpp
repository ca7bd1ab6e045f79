#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace hlie {

/// Exit status of the command-line front end.
enum ExitCode : int { kExitPass = 0, kExitFail = 1, kExitInput = 2 };

/// Runs one `hlie` invocation. `args` excludes the program name. The JSON
/// report goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hlie
