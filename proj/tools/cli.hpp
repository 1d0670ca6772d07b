#pragma once

#include <ostream>

namespace lcg::cli {

/// Runs the command line. Returns 0 on success, 1 when a verification check
/// fails or a computation cannot be completed, and 2 on usage or parse errors.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lcg::cli
