#include "overdisp/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "overdisp/errors.hpp"

namespace overdisp {

namespace {

// 21-point Kronrod abscissae (descending) and weights; the odd entries are
// the 10-point Gauss nodes.
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};

constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600525043980, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};

constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Segment {
    double a;
    double b;
    double value;
    double error;

    bool operator<(const Segment& other) const { return error < other.error; }
};

Segment gauss_kronrod21(const std::function<double(double)>& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);

    double kronrod = kWgk[10] * fc;
    double gauss = 0.0;
    double abs_sum = std::abs(kronrod);
    std::array<double, 10> f1{};
    std::array<double, 10> f2{};
    for (int j = 0; j < 10; ++j) {
        const double dx = half * kXgk[j];
        f1[j] = f(center - dx);
        f2[j] = f(center + dx);
        const double pair = f1[j] + f2[j];
        kronrod += kWgk[j] * pair;
        abs_sum += kWgk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
        if (j % 2 == 1) gauss += kWg[j / 2] * pair;
    }

    // Integral of |f - mean| drives the error scaling, as in QUADPACK.
    const double mean = 0.5 * kronrod;
    double asc = kWgk[10] * std::abs(fc - mean);
    for (int j = 0; j < 10; ++j) {
        asc += kWgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));
    }

    const double len = std::abs(half);
    const double result = kronrod * half;
    abs_sum *= len;
    asc *= len;
    double err = std::abs((kronrod - gauss) * half);
    if (asc != 0.0 && err != 0.0) {
        err = asc * std::min(1.0, std::pow(200.0 * err / asc, 1.5));
    }
    constexpr double eps = std::numeric_limits<double>::epsilon();
    if (abs_sum > std::numeric_limits<double>::min() / (50.0 * eps)) {
        err = std::max(50.0 * eps * abs_sum, err);
    }
    if (!std::isfinite(result)) {
        throw QuadratureFailure("integrand is not finite on the integration interval");
    }
    return {a, b, result, err};
}

}  // namespace

void QuadratureConfig::check() const {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) {
        throw DomainError("quadrature tolerances must be positive");
    }
    if (max_subdivisions < 1) {
        throw DomainError("quadrature max_subdivisions must be at least 1");
    }
}

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           std::span<const double> breakpoints, const QuadratureConfig& config) {
    config.check();
    if (a == b) return {};
    const double sign = a < b ? 1.0 : -1.0;
    const double lo = std::min(a, b);
    const double hi = std::max(a, b);

    std::vector<double> edges{lo};
    for (double x : breakpoints) {
        if (x > lo && x < hi) edges.push_back(x);
    }
    std::sort(edges.begin() + 1, edges.end());
    edges.push_back(hi);

    std::priority_queue<Segment> heap;
    double total = 0.0;
    double total_err = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        if (edges[i + 1] <= edges[i]) continue;
        Segment s = gauss_kronrod21(f, edges[i], edges[i + 1]);
        total += s.value;
        total_err += s.error;
        heap.push(s);
    }

    // Segments that cannot be bisected any further leave the heap but still count.
    double frozen_sum = 0.0;
    int subdivisions = 0;
    auto converged = [&] {
        return total_err <= std::max(config.abs_tol, config.rel_tol * std::abs(total));
    };
    while (!converged()) {
        if (heap.empty() || subdivisions >= config.max_subdivisions) {
            throw QuadratureFailure("adaptive quadrature did not reach tolerance (error estimate " +
                                    std::to_string(total_err) + ")");
        }
        Segment worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            frozen_sum += worst.value;
            continue;
        }
        Segment left = gauss_kronrod21(f, worst.a, mid);
        Segment right = gauss_kronrod21(f, mid, worst.b);
        ++subdivisions;
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }

    // Re-sum from the leaves to shed the drift of the running update.
    double sum = frozen_sum;
    while (!heap.empty()) {
        sum += heap.top().value;
        heap.pop();
    }
    return {sign * sum, total_err, subdivisions};
}

}  // namespace overdisp
