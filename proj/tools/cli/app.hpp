#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace vcoop::cli {

/// Parses arguments (argv[0] excluded), runs the subcommand and returns the
/// process exit status. Results go to `out` unless --out names a file;
/// diagnostics and summaries go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace vcoop::cli
