#pragma once

#include <iosfwd>

namespace skilldisc::cli {

/// Entry point of the command-line tool. Returns the process exit status:
/// 0 on success, 1 on a runtime or validation error, 2 on a usage error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace skilldisc::cli
