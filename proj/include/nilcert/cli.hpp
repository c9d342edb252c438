#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nilcert {

/// Runs one CLI invocation; args excludes the program name. Returns the exit
/// status: 0 success, 1 domain error (error JSON on `out`), 2 usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nilcert
