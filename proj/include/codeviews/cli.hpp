#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace codeviews::cli {

// Exit codes: 0 success, 1 partial (fatal diagnostics for a requested view, or
// PNG rendering failed), 2 bad arguments or nothing could be analyzed.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace codeviews::cli
