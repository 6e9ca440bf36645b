#pragma once

#include <string>
#include <vector>

#include "ctar/sampled_kernel.hpp"
#include "ctar/signed_measure.hpp"

// Analytic fixtures: exact kernels, delay measures and recursions used as
// ground truth by the tests and the `verify` command.

namespace ctar::closed_forms {

// Ornstein-Uhlenbeck autoregressive kernel for eta = -lambda delta_0:
//   lambda > 0: e^{-lambda t} on [0, inf)
//   lambda < 0: -e^{-lambda t} on (-inf, 0)
// sampled on [t_min, t_max).  Throws for lambda = 0 (no stationary solution).
SampledKernel ou_kernel(double lambda, double dt, double t_min, double t_max);

struct CarmaSpec {
    double a1 = 0.0;  // P(z) = z^2 + a1 z + a2
    double a2 = 0.0;
    double b0 = 0.0;  // Q(z) = b0 + z

    void validate() const;  // stationarity (a1, a2 > 0) and invertibility (b0 > 0)
};

// Delay measure eta(dv) = (b0 - a1) delta_0(dv) - (a2 - b0(a1 - b0)) e^{-b0 v} dv.
SignedMeasure carma_delay_measure(const CarmaSpec& spec);

// CARMA(2,1) kernel by residue expansion over the (distinct, real, negative)
// roots of P: g(t) = sum_i Q(l_i)/P'(l_i) e^{l_i t} on [0, horizon).
SampledKernel carma21_kernel(const CarmaSpec& spec, double dt, double horizon);

struct GammaDelayVerdict {
    bool condition_i = false;   // a1 < 0 and a1 + |a2| gamma^{-beta} < 0
    bool condition_ii = false;  // a1, a2 < 0 and beta < 1
    double margin = 0.0;        // a1 + |a2| gamma^{-beta}
    bool conclusive() const { return condition_i || condition_ii; }
    std::string text() const;
};

GammaDelayVerdict gamma_delay_existence(double alpha1, double alpha2, double beta, double gamma);

// The eta of the fractional-polynomial example:
// alpha1 delta_0 + gamma-density(alpha2, beta, gamma).
SignedMeasure gamma_delay_measure(double alpha1, double alpha2, double beta, double gamma);

struct ArmaSpec {
    std::vector<double> phi;    // phi_1..phi_p
    std::vector<double> theta;  // theta_1..theta_q

    // Numerically checks Phi(z) = 1 - phi_1 z - ... != 0 on |z| = 1 and counts
    // roots inside the unit disc by winding number; causal means none.
    void validate_causal() const;
};

// psi_0..psi_n of Theta(z)/Phi(z) by power-series long division:
// psi_j = theta_j + sum_{k=1..min(j,p)} phi_k psi_{j-k}, theta_0 = 1.
std::vector<double> arma_psi_weights(const ArmaSpec& spec, int n);

struct ArmaLevelInputs {
    SignedMeasure phi;     // sum phi_j delta_j
    SampledKernel theta;   // 1_{[0,1)} + sum theta_j 1_{[j,j+1)}
};

ArmaLevelInputs arma_level_inputs(const ArmaSpec& spec, double dt);

// theta(t) = t_+^d / Gamma(1 + d) for d in (0, 1/2), sampled on [0, horizon).
// Not integrable at infinity; consumers rely on its increments.
SampledKernel fractional_theta(double d, double dt, double horizon);

// Gamma(1-2d) / (Gamma(d) Gamma(1-d)) * second_moment / h0^2, the hyperbolic
// autocovariance prefactor.
double long_memory_constant(double d, double second_moment, double h0);

// Piecewise-constant kernel sum_j heights[j] 1_{[j w, (j+1) w)}.
SampledKernel staircase_kernel(const std::vector<double>& heights, double dt, double width = 1.0);

}  // namespace ctar::closed_forms
