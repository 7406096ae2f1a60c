#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sea {

/// Entry point of the `sea` tool. `args` excludes the program name. Text goes
/// to `out`, diagnostics to `err`; files land in <out-dir>/<subcommand>/.
/// Returns the process exit status.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sea
