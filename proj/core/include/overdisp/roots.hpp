#pragma once

#include <functional>

namespace overdisp {

struct RootConfig {
    /// Stop once |residual| <= tol.
    double tol = 1e-12;
    int max_iter = 200;

    void check() const;
};

struct RootResult {
    double x = 0.0;
    double residual = 0.0;
    int iterations = 0;
};

/// Brent's method on [lo, hi]: inverse quadratic / secant steps, falling back
/// to bisection whenever an interpolation step leaves the bracket or fails to
/// shrink it fast enough. Requires a sign change; throws BracketFailure
/// otherwise. Terminates on the residual tolerance or when the bracket has
/// collapsed to machine resolution.
RootResult find_root(const std::function<double(double)>& f, double lo, double hi,
                     const RootConfig& config = {});

}  // namespace overdisp
