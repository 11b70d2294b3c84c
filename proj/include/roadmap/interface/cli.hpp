#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace roadmap {

/// Runs the command line tool. `args` excludes the program name.
/// Returns 0 on success, 1 on model errors, 2 on usage errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace roadmap
