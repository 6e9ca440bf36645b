#pragma once

#include "ctar/sampled_kernel.hpp"
#include "ctar/signed_measure.hpp"

namespace ctar {

// (f * mu)(t) = \int f(t - v) mu(dv).
//
// Atoms contribute exact shifts (grid-aligned atoms also carry f's jump
// metadata into the result; off-grid atoms fall back to interpolated samples
// without metadata).  Density parts are integrated by exact cell masses
// against midpoint samples of f, which keeps second order across f's known
// discontinuities because midpoints never sit on a jump.
//
// The output grid starts at f.t0 and extends to out_horizon past it (capped
// to f's own window plus the measure's effective support).
SampledKernel convolve_with_measure(const SampledKernel& f, const SignedMeasure& mu,
                                    double out_horizon, double mass_tail_tol = 1e-12);

// (theta * g)(t) = theta(t) * g.atom_at_zero + \int theta(t - u) d(u) du for a
// kernel-measure g = atom_at_zero * delta_0 + d(u) du (the x0(du) layout).
// Density cells are integrated by the trapezoid rule with jump-aware edges.
SampledKernel convolve_with_kernel_measure(const SampledKernel& theta, const SampledKernel& g,
                                           double out_horizon);

}  // namespace ctar
