#pragma once

#include <ostream>

namespace allockit::cli {

/// Parses the command line, runs one subcommand and maps failures to exit codes:
/// 2 configuration, 3 data, 4 convergence.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace allockit::cli
