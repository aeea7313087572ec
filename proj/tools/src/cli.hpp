#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dagiso::cli {

/// Parses `args` (without the program name), dispatches one verb and writes
/// its JSON result to `out` (or to --out). Errors go to `err` as JSON.
/// Returns 0 on success or a "yes" verdict, 1 on a "no" verdict, 2 on error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dagiso::cli
