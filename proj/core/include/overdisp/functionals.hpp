#pragma once

#include "overdisp/model.hpp"
#include "overdisp/quadrature.hpp"

namespace overdisp {

/// How integral functionals are evaluated. Auto takes the closed form when
/// the (subordinator, service) pair has one and falls back to quadrature.
enum class Evaluation { Auto, Quadrature };

/// z_k^+ = int_0^1 Fbar(s)^k ds, k >= 1.
double z_plus(int k, const ServiceDistribution& service, Evaluation how = Evaluation::Auto,
              const QuadratureConfig& config = {});

/// z_k^-(tau) = int_0^1 beta^{(k)}(tau Fbar(s)) Fbar(s)^k ds, k in {0, 1, 2}.
/// Requires tau Fbar(0) < theta_dom; throws DomainError otherwise.
double z_minus(int k, double tau, const Subordinator& subordinator,
               const ServiceDistribution& service, Evaluation how = Evaluation::Auto,
               const QuadratureConfig& config = {});
double z_minus(int k, double tau, const Model& model, Evaluation how = Evaluation::Auto,
               const QuadratureConfig& config = {});

/// z_1^-(tau) - z_1^-(0) = int_0^1 (beta'(tau Fbar) - beta'(0)) Fbar ds, accurate
/// for tiny tau where subtracting the two integrals would cancel.
double z1_minus_increment(double tau, const Model& model, const QuadratureConfig& config = {});

/// Z(tau) = (mu / tau) int_0^1 r Fbar(s) / (mu - tau Fbar(s))^2 ds for a Gamma
/// subordinator; z_2^-(tau) = -z_1^-(tau) / tau + Z(tau).
/// Throws DomainError unless 0 < tau and tau Fbar(0) < mu, Unsupported for
/// other subordinators.
double z_cap(double tau, const Model& model, Evaluation how = Evaluation::Auto,
             const QuadratureConfig& config = {});

/// Spence's function Li2(x) = -int_0^x log(1 - t) / t dt for x <= 1.
double dilog(double x);

/// Scaled log-mgf gamma_n(theta) = phi_n int_0^1 beta(psi_n alpha(theta) Fbar(s)) ds
/// with alpha(theta) = e^theta - 1, or its first / second derivative.
/// Throws DomainError when psi_n alpha(theta) Fbar(0) leaves the beta domain.
double lmgf_n(double theta, const Model& model, int order, Evaluation how = Evaluation::Auto,
              const QuadratureConfig& config = {});

}  // namespace overdisp
