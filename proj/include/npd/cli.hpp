#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace npd {

// Runs one command line (without the program name). Exit codes: 0 success,
// 1 failed repro bundle or unmet precondition, 2 usage or input error.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace npd
