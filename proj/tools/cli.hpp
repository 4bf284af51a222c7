#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace cva::cli {

// The whole command-line front end, callable in-process for tests.
// argv excludes the program name.
int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

}  // namespace cva::cli
