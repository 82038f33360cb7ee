#pragma once

#include <string>
#include <vector>

namespace focir::cli {

/// Exit codes of the command-line tool.
enum ExitCode : int {
    exit_ok = 0,
    exit_tolerance = 1,
    exit_input = 2,
    exit_inversion = 3,
};

/// Entry point: `focir <simulate|coeffs|identify|roundtrip> ...`.
int run(int argc, char** argv);

/// Same, with args[0] the program name.
int run(const std::vector<std::string>& args);

}  // namespace focir::cli
