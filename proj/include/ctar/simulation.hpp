#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ctar/sampled_kernel.hpp"
#include "ctar/signed_measure.hpp"

namespace ctar::sim {

// Finite-activity centered two-sided Levy driver: Brownian component plus
// compound Poisson jumps with a centered jump law.
struct JumpPart {
    enum class Law { none, centered_normal, two_point };
    Law law = Law::none;
    double rate = 0.0;   // jumps per unit time
    double param = 0.0;  // variance for centered_normal, magnitude for two_point

    double second_moment() const;  // E[J^2] of one jump
};

struct LevyDriver {
    double gaussian_var = 1.0;  // sigma^2
    JumpPart jumps;

    double second_moment() const;  // E[L_1^2] = sigma^2 + rate * E[J^2]
    std::string describe() const;
};

// Realized path or increment stream; bit-exact function of (config, seed).
struct PathSample {
    double dt = 0.0;
    double t_start = 0.0;
    std::vector<double> values;
    std::uint64_t seed = 0;
    std::uint32_t stream = 0;
    std::string driver_desc;

    double time_at(std::size_t i) const { return t_start + dt * static_cast<double>(i); }
};

struct IntegrabilityReport {
    bool pass = false;
    double value = 0.0;  // \int (f^2 sigma^2 + \int (xf)^2 ^ |xf| nu(dx)) du
};

IntegrabilityReport integrability_check(const SampledKernel& f, const LevyDriver& driver);

// i.i.d. increments of the driver over [t_start, t_start + n dt).
PathSample simulate_increments(const LevyDriver& driver, double dt, std::size_t n, double t_start,
                               std::uint64_t seed, std::uint32_t stream = 0);

// X_{t_k} = sum_{u_j < t_k} psi(t_k - u_j) dL_j (left-point rule).  The output
// window drops the burn-in region where the kernel support is not covered.
// Throws "kernel horizon too short" if the stored tail of psi carries more
// than `truncation_tol` of its L2 mass.
PathSample moving_average_path(const SampledKernel& psi, const PathSample& increments,
                               double truncation_tol = 1e-3);

// Explicit Euler scheme for dX = (\int X_{t-v} eta(dv)) dt + dZ.  `init` must
// cover the delay horizon of eta and end at noise.t_start; its last sample is
// the initial condition.  Output includes the initial sample.
PathSample euler_sdde_path(const SignedMeasure& eta, const PathSample& noise,
                           const PathSample& init);

// Increments of the fractional noise Z built from theta(t) = t_+^d/Gamma(1+d):
// dZ_k = sum_i [theta(i dt) - theta((i-1) dt)] dL_{k-i}, i = 1..max_lag/dt.
// Throws when the truncated tap tail exceeds `horizon_tol` of the tap energy.
PathSample fractional_noise_increments(double d, const LevyDriver& driver, double dt,
                                       std::size_t n, double t_start, std::uint64_t seed,
                                       std::uint32_t stream = 0, double max_lag = 64.0,
                                       double horizon_tol = 2e-3);

}  // namespace ctar::sim
