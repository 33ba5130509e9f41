#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bivos::cli {

/// Runs one CLI invocation. `args` excludes the program name.
/// Returns 0 on success, 2 on a usage error, 1 on a domain/resource error
/// (reported on `err` as `error: <code>: <message>`).
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace bivos::cli
