#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace icheck {

// Entry point behind the `icheck` binary. Human-readable report goes to
// `out`; the machine-readable JSON document is appended after a "---" line
// (or written to the --json file). Returns the process exit code:
// 0 accepted/certified, 1 rejected/refuted, 2 input error, 3 budget error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace icheck
