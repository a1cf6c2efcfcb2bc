#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace hedgekit::optimize {

using Objective = std::function<double(const std::vector<double>&)>;

struct Result {
    std::vector<double> x;
    double value = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
};

struct Options {
    double tolerance = 1e-8;
    std::size_t max_iterations = 2000;
};

// Derivative-free simplex minimization (Nelder-Mead with standard
// reflection/expansion/contraction coefficients). Converges when the spread
// of the simplex function values falls below tolerance.
Result nelder_mead(const Objective& f, const std::vector<double>& start,
                   double initial_step, const Options& opts = {});

// BFGS with central-difference gradients and backtracking line search.
// Intended as a local polish after the simplex stage.
Result bfgs(const Objective& f, const std::vector<double>& start,
            const Options& opts = {});

}  // namespace hedgekit::optimize
