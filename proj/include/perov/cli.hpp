#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace perov {

/// Entry point of the `perov` tool. `args` excludes the program name.
/// Returns 0 when every check passes, 1 when a mathematical violation was
/// found and 2 for input or usage errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace perov
