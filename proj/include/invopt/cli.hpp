#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace invopt {

// Exit codes: 0 ok, 1 parse/validation/usage, 2 solver failure,
// 3 verification failure.
int cli_run(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace invopt
