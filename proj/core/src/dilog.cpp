#include <cmath>
#include <numbers>

#include "overdisp/errors.hpp"
#include "overdisp/functionals.hpp"

namespace overdisp {

namespace {

// sum_{k>=1} x^k / k^2, |x| <= 1/2.
double dilog_series(double x) {
    double term = x;
    double sum = 0.0;
    for (int k = 1; k < 200; ++k) {
        const double add = term / (static_cast<double>(k) * k);
        sum += add;
        if (std::abs(add) <= 1e-17 * std::abs(sum)) break;
        term *= x;
    }
    return sum;
}

}  // namespace

double dilog(double x) {
    constexpr double pi2_6 = std::numbers::pi * std::numbers::pi / 6.0;
    if (std::isnan(x) || x > 1.0) {
        throw DomainError("dilog is only defined here for x <= 1");
    }
    if (x == 1.0) return pi2_6;
    if (x == 0.0) return 0.0;
    if (x > 0.5) {
        // Euler reflection.
        return pi2_6 - std::log(x) * std::log1p(-x) - dilog_series(1.0 - x);
    }
    if (x >= -0.5) return dilog_series(x);
    if (x >= -1.0) {
        // Landen: x / (x - 1) lies in [1/3, 1/2].
        const double l = std::log1p(-x);
        return -dilog_series(x / (x - 1.0)) - 0.5 * l * l;
    }
    // Inversion: 1/x in (-1, 0).
    const double l = std::log(-x);
    return -pi2_6 - 0.5 * l * l - dilog(1.0 / x);
}

}  // namespace overdisp
