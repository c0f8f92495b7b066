#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace superint::cli {

enum Exit { Ok = 0, Failed = 1, Usage = 2 };

// Runs one subcommand. Reports go to out (or --output), diagnostics to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace superint::cli
