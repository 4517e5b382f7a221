#include "overdisp/roots.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include "overdisp/errors.hpp"

namespace overdisp {

void RootConfig::check() const {
    if (!(tol >= 0.0)) throw DomainError("root tolerance must be non-negative");
    if (max_iter < 1) throw DomainError("root max_iter must be at least 1");
}

RootResult find_root(const std::function<double(double)>& f, double lo, double hi,
                     const RootConfig& config) {
    config.check();
    double a = lo;
    double b = hi;
    double fa = f(a);
    double fb = f(b);
    if (fa == 0.0) return {a, 0.0, 0};
    if (fb == 0.0) return {b, 0.0, 0};
    if (std::isnan(fa) || std::isnan(fb) || (fa > 0.0) == (fb > 0.0)) {
        std::ostringstream os;
        os.precision(6);
        os << "root not bracketed on [" << lo << ", " << hi << "]: residuals " << fa << ", " << fb;
        throw BracketFailure(os.str());
    }

    constexpr double eps = std::numeric_limits<double>::epsilon();
    // c is the previous iterate on the opposite side of the root from b.
    double c = a;
    double fc = fa;
    double d = b - a;
    double e = d;
    for (int iter = 1; iter <= config.max_iter; ++iter) {
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        const double tol1 = 2.0 * eps * std::abs(b) + 0.5 * std::numeric_limits<double>::min();
        const double m = 0.5 * (c - b);
        if (std::abs(fb) <= config.tol || std::abs(m) <= tol1 || fb == 0.0) {
            return {b, fb, iter};
        }
        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            double p;
            double q;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                const double qa = fa / fc;
                const double r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) {
                q = -q;
            } else {
                p = -p;
            }
            if (2.0 * p < std::min(3.0 * m * q - std::abs(tol1 * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = d;
            }
        } else {
            d = m;
            e = d;
        }
        a = b;
        fa = fb;
        if (std::abs(d) > tol1) {
            b += d;
        } else {
            b += m > 0.0 ? tol1 : -tol1;
        }
        fb = f(b);
    }
    std::ostringstream os;
    os << "root finder exhausted " << config.max_iter << " iterations (residual " << fb << ")";
    throw BracketFailure(os.str());
}

}  // namespace overdisp
