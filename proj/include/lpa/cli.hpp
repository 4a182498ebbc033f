#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lpa::cli {

/// Runs the command line given by args (without the program name), writing
/// to the given streams. Exit codes: 0 success / strongly graded, 2 negative
/// verdict or corpus mismatch, 3 unknown verdict, 64 usage, 65 parse or data
/// error, 70 internal cap exceeded.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lpa::cli
