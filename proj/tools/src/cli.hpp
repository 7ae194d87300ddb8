#pragma once

#include <ostream>

namespace contagion::cli {

enum ExitCode : int {
    kOk = 0,
    kInvalid = 1,
    kNonStationary = 2,
    kConvergence = 3,
    kVerificationFailed = 4,
};

/// Entry point of the `contagion` binary; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace contagion::cli
