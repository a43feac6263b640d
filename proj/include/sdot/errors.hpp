// SPDX-License-Identifier: MIT
#pragma once

#include <stdexcept>
#include <string>

namespace sdot {

// Bad user input: malformed scenario, invalid atoms, out-of-domain argument.
struct InputError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Iterative solver failed to reach its tolerance.
struct ConvergenceError : std::runtime_error {
    ConvergenceError(const std::string& what, double residual_)
        : std::runtime_error(what), residual(residual_) {}
    double residual;
};

// Adaptive quadrature exhausted max_depth without meeting tolerance.
struct QuadratureError : std::runtime_error {
    QuadratureError(const std::string& what, double best_, double error_bound_)
        : std::runtime_error(what), best(best_), error_bound(error_bound_) {}
    double best;
    double error_bound;
};

// Two independent computations of the same quantity disagree.
struct ConsistencyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace sdot
