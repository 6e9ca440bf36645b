#pragma once

#include <string>

#include "ctar/sampled_kernel.hpp"
#include "ctar/signed_measure.hpp"

namespace ctar::solver {

struct StripScanParams {
    double y_max = 0.0;      // 0 = auto: 1.5 * (1 + |eta|) covers every possible zero
    int y_points = 4096;     // samples on [0, y_max] (conjugate symmetry covers y < 0)
    double zero_tol = 1e-9;  // relative to 1 + |eta|
    double line_tol = 1e-3;  // relative floor for |h| on certified lines
    double a_init = -0.5;    // first trial for the left strip edge
    int max_shrink = 40;
    int x_columns = 257;     // rectangle columns for the causality / right-edge scans
    double b_cap = 4.0;      // absolute cap for the right-edge search
};

// Verified non-vanishing region of h and the inversion offset, in the sense
// of a finite scan certificate: zeros between scan points are not excluded.
struct StripReport {
    double min_abs_h_on_axis = 0.0;
    double a = 0.0;  // certified left edge (< 0)
    double b = 0.0;  // certified right edge (>= 0; > 0 only with an exponential moment)
    double c = 0.0;  // inversion offset in (a, 0)
    bool causal = false;
    double y_max = 0.0;
    int grid_points = 0;
    double zero_tol_abs = 0.0;

    std::string to_text() const;  // flat key = value block
};

StripReport find_strip(const SignedMeasure& eta, const StripScanParams& params = {});

struct SolveGrid {
    int log2_n = 16;              // N = 2^log2_n frequency/time samples
    double dt = 1.0 / 1024.0;     // window is [-N dt / 2, N dt / 2)
    double causality_tol = 1e-4;  // max negative-time L2 fraction before clipping
    double aliasing_tol = 1e-3;   // spectral tail-to-head ratio guard
    double tail_tol = 3e-3;       // max L2 fraction in the trailing 1/16 window
};

// Autoregressive kernel: inverts L[x0] = 1/h on the line Re z = strip.c by
// FFT with an exponential jump reference matched to the unit jump at t = 0,
// then reweights by e^{-c u}.  Causal strips are clipped to t >= 0 after the
// negative-time mass audit.
SampledKernel solve_x0(const SignedMeasure& eta, const StripReport& strip,
                       const SolveGrid& grid = {});

// sup_t | x0(t) - 1_{t>=0} - \int_{-inf}^t \int x0(u-v) eta(dv) du |.
double resolvent_residual(const SampledKernel& x0, const SignedMeasure& eta);

// \int \int x0(u-v) eta(dv) du; equals -1 when eta has a first moment.
double mass_identity(const SampledKernel& x0, const SignedMeasure& eta);

// The Lebesgue-Stieltjes measure x0(du) = delta_0 + (\int x0(u-v) eta(dv)) du,
// returned with atom_at_zero = 1 and the density in `values`.
SampledKernel x0_measure(const SampledKernel& x0, const SignedMeasure& eta);

// Domination measure mu(du) = \int |x0(u-v)| |eta|(dv) du (no atom).
SampledKernel domination_measure(const SampledKernel& x0, const SignedMeasure& eta);

// theta * x0(du); throws if theta fails the L1(mu) integrability gate.
SampledKernel convolve_kernel_with_x0_measure(const SampledKernel& theta,
                                              const SampledKernel& x0m,
                                              double out_horizon);

// Level kernel by the convolution series sum theta * phi^{*n}; requires the
// contraction |phi|((0,inf)) < 1.  Truncates when the a-priori geometric
// bound ||theta||_2 rho^{n+1} / (1 - rho) drops below tol.
SampledKernel level_kernel_series(const SampledKernel& theta, const SignedMeasure& phi,
                                  double tol, double out_horizon);

struct LevelTransformParams {
    double a = -0.5;           // strip to certify for 1 - L[phi]
    int log2_n = 13;
    double dt = 1.0 / 256.0;
    double denom_tol = 1e-3;   // abs floor for |1 - L[phi]| across scanned offsets
    int offset_scans = 11;     // offsets a/2^m, m = 0..offset_scans-1
    int y_points = 2048;
};

// Level kernel by transform ratio: inverts L[theta]/(1 - L[phi]) on a vertical
// line, with the kernel's jump set reconstructed from theta's jumps and phi's
// atoms.  Throws when 1 - L[phi] comes within denom_tol of zero on any
// scanned offset (the unit-root obstruction).
SampledKernel level_kernel_transform(const SampledKernel& theta, const SignedMeasure& phi,
                                     const LevelTransformParams& params = {});

// sup_t over the grid of | psi(t) - \int psi(t-u) phi(du) - theta(t) |,
// evaluated where the convolution window is fully covered.
double level_fixed_point_residual(const SampledKernel& psi, const SignedMeasure& phi,
                                  const SampledKernel& theta);

// Stationary-increment route: for absolutely continuous eta with zero total
// mass, solves the level model with phi(du) = F_eta(u) du and
// theta = f - f(. - s).  Throws "use the stationary SDDE route" when the
// total mass is nonzero and "increment contraction fails" when
// \int |F_eta| >= 1.
SampledKernel increment_solution_kernel(const SampledKernel& f, const SignedMeasure& eta,
                                        double s, double tol, double out_horizon);

// \int_0^inf |F_eta(t)| dt for the admissibility gate.
double increment_contraction_norm(const SignedMeasure& eta);

}  // namespace ctar::solver
