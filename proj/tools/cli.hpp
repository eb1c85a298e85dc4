#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sim::cli {

/// Runs the `simrank` command line. Returns the process exit status:
/// 0 on success, 2 for bad input (unreadable files, malformed formats,
/// invalid flags or parameters), 1 for anything unexpected.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sim::cli
