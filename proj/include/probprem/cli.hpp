#pragma once
#include <iosfwd>
#include <string>
#include <vector>

namespace probprem {

/// Command-line entry point. `args` excludes the program name.
/// Returns 0 on success, 2 on input errors, 3 on solver failures.
int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace probprem
