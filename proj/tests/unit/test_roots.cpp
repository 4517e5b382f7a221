#include <cmath>

#include <gtest/gtest.h>

#include "overdisp/errors.hpp"
#include "overdisp/roots.hpp"

using namespace overdisp;

namespace {

// Plain bisection to full resolution, the independent oracle.
double bisect(const std::function<double(double)>& f, double lo, double hi) {
    double flo = f(lo);
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        const double fm = f(mid);
        if ((fm > 0) == (flo > 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TEST(Brent, MatchesBisection) {
    const std::vector<std::tuple<std::function<double(double)>, double, double>> cases = {
        {[](double x) { return std::cos(x) - x; }, 0.0, 1.0},
        {[](double x) { return x * x * x - 2 * x - 5; }, 2.0, 3.0},
        {[](double x) { return std::exp(x) - 10.0; }, -5.0, 5.0},
        {[](double x) { return std::log(x) + x; }, 1e-6, 1.0},
        {[](double x) { return std::atan(x - 0.3) * 1e-3; }, -10.0, 10.0},
    };
    RootConfig cfg;
    cfg.tol = 0.0;
    for (const auto& [f, lo, hi] : cases) {
        const auto r = find_root(f, lo, hi, cfg);
        const double oracle = bisect(f, lo, hi);
        EXPECT_NEAR(r.x, oracle, 4e-15 * std::max(1.0, std::abs(oracle)));
        EXPECT_LT(r.iterations, 60);
    }
}

TEST(Brent, ResidualToleranceStopsEarly) {
    RootConfig cfg;
    cfg.tol = 1e-6;
    const auto r = find_root([](double x) { return x - 0.25; }, 0.0, 1.0, cfg);
    EXPECT_LE(std::abs(r.residual), 1e-6);
}

TEST(Brent, EndpointRoots) {
    const auto r = find_root([](double x) { return x; }, 0.0, 1.0);
    EXPECT_EQ(r.x, 0.0);
    const auto s = find_root([](double x) { return x - 1.0; }, 0.0, 1.0);
    EXPECT_EQ(s.x, 1.0);
}

TEST(Brent, ThrowsWithoutSignChange) {
    EXPECT_THROW(find_root([](double x) { return x * x + 1.0; }, -1.0, 1.0), BracketFailure);
    EXPECT_THROW(find_root([](double) { return std::nan(""); }, -1.0, 1.0), BracketFailure);
}

TEST(Brent, ThrowsWhenIterationsRunOut) {
    RootConfig cfg;
    cfg.tol = 0.0;
    cfg.max_iter = 2;
    EXPECT_THROW(find_root([](double x) { return std::cos(x) - x; }, 0.0, 1.0, cfg),
                 BracketFailure);
}

TEST(Brent, ConfigValidation) {
    RootConfig cfg;
    cfg.tol = -1.0;
    EXPECT_THROW(cfg.check(), DomainError);
    cfg = {};
    cfg.max_iter = 0;
    EXPECT_THROW(cfg.check(), DomainError);
}
