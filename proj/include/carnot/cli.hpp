#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace carnot {

/// Command dispatch for the carnot tool. Exit codes: 0 success, 1 domain-check
/// failure, 2 parse/usage error, 3 budget exceeded.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace carnot
