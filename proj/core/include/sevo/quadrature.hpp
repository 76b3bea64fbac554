#pragma once

#include <functional>

namespace sevo {

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;     // estimated absolute error
    long evaluations = 0;
    bool converged = false;
};

// Adaptive Gauss-Kronrod (7,15) integration over [a, b]. Subdivides until the
// local Kronrod-Gauss discrepancy meets rel_tol/abs_tol or max_depth is hit.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double rel_tol = 1e-10, double abs_tol = 0.0,
                                    int max_depth = 60);

}  // namespace sevo
