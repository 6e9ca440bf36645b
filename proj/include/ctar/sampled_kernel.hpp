#pragma once

#include <cstdint>
#include <vector>

namespace ctar {

// Known discontinuity of a sampled function at grid point `index`:
// the stored value is the right limit, the left limit is values[index] - size.
struct Jump {
    std::int64_t index = 0;
    double size = 0.0;
};

// Real function on a uniform time grid, stored as its right-continuous
// representative.  `atom_at_zero` is only nonzero when the object represents
// the Lebesgue-Stieltjes measure induced by an autoregressive kernel, in
// which case `values` holds the density part.
//
// Jump metadata makes quadrature against these functions second-order even
// across discontinuities (step kernels, the unit jump of autoregressive
// kernels at the origin).  Jumps are tracked at grid points only; fixtures
// with off-grid discontinuities must choose a commensurate dt.
struct SampledKernel {
    double dt = 0.0;
    double t0 = 0.0;  // time of values[0]; negative for noncausal kernels
    std::vector<double> values;
    double atom_at_zero = 0.0;
    std::vector<Jump> jumps;

    std::size_t size() const { return values.size(); }
    double time_at(std::int64_t i) const { return t0 + dt * static_cast<double>(i); }
    double end_time() const { return time_at(static_cast<std::int64_t>(values.size())); }

    // Grid index of time t; requires t to be grid-aligned within `tol` cells.
    std::int64_t index_of(double t, double tol = 1e-9) const;
    bool is_grid_aligned(double t, double tol = 1e-9) const;

    // Right-continuous value at an arbitrary time: exact sample on grid
    // points, linear interpolation inside cells (no cell straddles a jump
    // because jumps sit on grid points), zero outside the stored window.
    double value_at(double t) const;

    // Left limit at grid index i.
    double left_value(std::int64_t i) const;

    double jump_at_index(std::int64_t i) const;

    // Norms of the grid representation (density part only).
    double l1_norm() const;
    double l2_norm() const;
    double sup_norm() const;

    // f(t - shift) on the same grid (t0 moves; jump indices are preserved).
    SampledKernel shifted(double shift) const;

    // Restrict to [t_lo, t_hi); both must be grid-aligned.
    SampledKernel clipped(double t_lo, double t_hi) const;

    // Drop a trailing region whose L2 mass is below rel_tol * total L2 mass.
    SampledKernel trimmed_tail(double rel_tol) const;

    void add_jump(std::int64_t index, double size);
    void sort_jumps();
};

// Pointwise linear combination out = a*f + b*g on a common grid (dt must
// match; supports differing windows).  Jump lists are merged.
SampledKernel linear_combination(double a, const SampledKernel& f, double b,
                                 const SampledKernel& g);

// Cumulative integral C(t_i) = \int_{t0}^{t_i} f(u) du by the trapezoid rule,
// using left limits on cell right-edges so known jumps do not degrade the
// order.  The result is continuous (no jumps).
SampledKernel cumulative_integral(const SampledKernel& f);

// \int f du over the stored window (trapezoid, jump-aware).
double integrate(const SampledKernel& f);

// Grid-L2 distance sqrt(dt * sum (f-g)^2) over the union of supports.
double grid_l2_distance(const SampledKernel& f, const SampledKernel& g);
double grid_sup_distance(const SampledKernel& f, const SampledKernel& g);

// Samples at half-grid offsets: out[i] = f(t0 + (i+1/2) dt), one entry per
// cell.  Used by midpoint quadrature against measure cell masses.
std::vector<double> half_grid_samples(const SampledKernel& f);

}  // namespace ctar
