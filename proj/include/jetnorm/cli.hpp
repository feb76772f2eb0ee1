#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace jetnorm {

/// Exit codes: 0 success, 1 structural/parse error, 2 domain error
/// (degenerate metric, backend incompleteness), 3 internal invariant
/// violation (always a bug).
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace jetnorm
