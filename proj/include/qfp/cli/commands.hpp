#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace qfp::cli {

/// Entry point: args exclude the program name. Returns 0 on success, 2 for
/// configuration or validation errors, 3 for numerical failures.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qfp::cli
