#pragma once

#include <functional>
#include <span>

namespace overdisp {

struct QuadratureConfig {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    int max_subdivisions = 200;

    /// Throws DomainError on non-positive tolerances or max_subdivisions < 1.
    void check() const;
};

struct QuadratureResult {
    double value = 0.0;
    double abs_error = 0.0;
    int subdivisions = 0;
};

/// Globally adaptive Gauss-Kronrod (10/21 point) integration of f over [a, b].
/// The interval is split at every breakpoint strictly inside (a, b) before
/// adaptation starts, so jump discontinuities there cost nothing.
/// Throws QuadratureFailure when the tolerance cannot be met within
/// max_subdivisions bisections.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           std::span<const double> breakpoints = {},
                           const QuadratureConfig& config = {});

}  // namespace overdisp
