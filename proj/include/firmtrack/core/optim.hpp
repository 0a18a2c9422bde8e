#pragma once

#include <functional>
#include <vector>

namespace firmtrack::optim {

using Objective = std::function<double(const std::vector<double>&)>;

struct Options {
    int max_evaluations = 1000;
    double rel_tolerance = 1e-8;
    double initial_step = 0.1;
};

struct Result {
    std::vector<double> x;
    double value = 0.0;
    int evaluations = 0;
    bool converged = false;
};

/// Nelder-Mead simplex minimization.
Result nelder_mead(const Objective& f, std::vector<double> x0, const Options& opts = {});

/// Central-difference gradient.
std::vector<double> numeric_gradient(const Objective& f, const std::vector<double>& x,
                                     double step = 1e-5);

/// BFGS with numeric gradients and backtracking line search. Intended as a
/// polish step from a near-optimal start.
Result bfgs_polish(const Objective& f, std::vector<double> x0, const Options& opts = {});

/// Simplex search followed by quasi-Newton polish, sharing one evaluation
/// budget. Degenerates gracefully for zero-dimensional problems.
Result minimize(const Objective& f, std::vector<double> x0, const Options& opts = {});

}  // namespace firmtrack::optim
