#pragma once

#include <stdexcept>

namespace hsld {

// Violations of domain rules: infeasible sampling, invalid layouts, solver
// non-convergence.  The CLI maps these to exit code 1.
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed or unreadable files.  Also exit code 1 (not a usage error).
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}
