#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lzero {

/// Runs the command-line front end. Returns the process exit code:
/// 0 when a result was computed (including a "fails" verdict), 2 for bad
/// input, 3 when a numerical procedure did not converge.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lzero
