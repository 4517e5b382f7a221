#pragma once

#include <cmath>
#include <functional>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "overdisp/model.hpp"

namespace testing_support {

inline overdisp::Model make_model(overdisp::ServiceDistribution service, double u = 1.0,
                                  std::int64_t n = 50, const std::string& f = "1",
                                  double r = 1.0, double mu = 1.0) {
    overdisp::ModelSpec spec;
    spec.subordinator = overdisp::Subordinator::gamma(r, mu);
    spec.service = std::move(service);
    spec.u = u;
    spec.scaling = {n, overdisp::Exponent::parse(f)};
    return overdisp::validate(std::move(spec));
}

inline overdisp::Model det_model(std::int64_t n = 50, const std::string& f = "1", double u = 1.0) {
    return make_model(overdisp::ServiceDistribution::deterministic(0.5), u, n, f);
}

// Independent oracle: Boost's 61-point Gauss-Kronrod, split at an optional jump.
inline double oracle_integral(const std::function<double(double)>& f, double a, double b,
                              double jump = -1.0) {
    using boost::math::quadrature::gauss_kronrod;
    if (jump > a && jump < b) {
        return gauss_kronrod<double, 61>::integrate(f, a, jump, 15, 1e-14) +
               gauss_kronrod<double, 61>::integrate(f, jump, b, 15, 1e-14);
    }
    return gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-14);
}

inline double rel_diff(double a, double b) {
    return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

}  // namespace testing_support
