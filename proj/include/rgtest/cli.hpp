#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rgtest::cli {

enum ExitCode : int {
    exit_ok = 0,
    exit_internal = 1,
    exit_usage = 2,
    exit_data = 3,
    exit_ill_conditioned = 4,
    exit_oracle = 5,
};

/// Entry point of the rgtest executable.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Same, with the arguments after the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rgtest::cli
