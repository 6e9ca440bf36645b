#include "ctar/kernel_ops.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "ctar/fft.hpp"
#include "ctar/simd/kernels.hpp"

namespace ctar {

namespace {

// out[k] += sum_i masses[i] * f_half[k - 1 - i].  Short problems run as
// contiguous dots against the reversed mass vector; long ones switch to one
// FFT linear convolution.
void convolve_masses_against_half_samples(const std::vector<double>& masses,
                                          const std::vector<double>& f_half,
                                          std::vector<double>& out) {
    const std::size_t n_mass = masses.size();
    const std::size_t n_half = f_half.size();
    if (n_mass == 0 || n_half == 0 || out.size() < 2) return;

    if (n_mass * n_half > (std::size_t{1} << 26)) {
        std::size_t m = 1;
        while (m < n_mass + n_half) m <<= 1;
        std::vector<std::complex<double>> fa(m), fb(m);
        for (std::size_t i = 0; i < n_mass; ++i) fa[i] = masses[i];
        for (std::size_t i = 0; i < n_half; ++i) fb[i] = f_half[i];
        fft::transform(fa, false);
        fft::transform(fb, false);
        for (std::size_t i = 0; i < m; ++i) fa[i] *= fb[i];
        fft::transform(fa, true);
        for (std::size_t k = 1; k < out.size(); ++k)
            if (k - 1 < m) out[k] += fa[k - 1].real();
        return;
    }

    std::vector<double> rev(masses.rbegin(), masses.rend());
    for (std::size_t k = 1; k < out.size(); ++k) {
        // j = index into f_half, mass index = k - 1 - j, rev index = n_mass - k + j.
        const std::size_t j_lo = k > n_mass ? k - n_mass : 0;
        const std::size_t j_hi = std::min<std::size_t>(n_half, k);
        if (j_lo >= j_hi) continue;
        const double* a = f_half.data() + j_lo;
        const double* b = rev.data() + (n_mass - k + j_lo);
        out[k] += simd::dot(a, b, j_hi - j_lo);
    }
}

}  // namespace

SampledKernel convolve_with_measure(const SampledKernel& f, const SignedMeasure& mu,
                                    double out_horizon, double mass_tail_tol) {
    if (f.dt <= 0.0) throw std::invalid_argument("kernel has no grid");
    const double dt = f.dt;

    double support = delay_horizon(mu, mass_tail_tol) +
                     dt * static_cast<double>(f.values.size());
    support = std::min(support, out_horizon);
    const auto n_out = static_cast<std::size_t>(std::llround(std::ceil(support / dt)));

    SampledKernel out;
    out.dt = dt;
    out.t0 = f.t0;
    out.values.assign(n_out, 0.0);

    // Atom part: exact shifts.
    for (const auto& a : mu.atoms) {
        if (a.weight == 0.0) continue;
        const double cells = a.location / dt;
        const double r = std::round(cells);
        const bool aligned = std::fabs(cells - r) < 1e-9;
        if (aligned) {
            const auto off = static_cast<std::int64_t>(r);
            for (std::size_t i = 0; i < f.values.size(); ++i) {
                const auto k = static_cast<std::int64_t>(i) + off;
                if (k >= 0 && k < static_cast<std::int64_t>(n_out))
                    out.values[static_cast<std::size_t>(k)] += a.weight * f.values[i];
            }
            for (const auto& j : f.jumps) out.add_jump(j.index + off, a.weight * j.size);
        } else {
            for (std::size_t k = 0; k < n_out; ++k)
                out.values[k] += a.weight * f.value_at(out.time_at(static_cast<std::int64_t>(k)) -
                                                       a.location);
        }
    }

    // Density part: exact cell masses against midpoint samples of f.
    if (mu.has_density()) {
        const double mass_support = std::min(delay_horizon(mu, mass_tail_tol), support);
        const auto n_mass = static_cast<std::size_t>(std::llround(std::ceil(mass_support / dt)));
        if (n_mass > 0) {
            const auto masses = density_cell_masses(mu, dt, n_mass);
            const auto f_half = half_grid_samples(f);
            convolve_masses_against_half_samples(masses, f_half, out.values);
        }
    }

    out.sort_jumps();
    return out;
}

SampledKernel convolve_with_kernel_measure(const SampledKernel& theta, const SampledKernel& g,
                                           double out_horizon) {
    if (theta.dt != g.dt) throw std::invalid_argument("grid step mismatch");
    const double dt = theta.dt;
    const double t0 = theta.t0 + std::min(g.t0, 0.0);
    const auto n_out = static_cast<std::size_t>(
        std::llround(std::ceil((out_horizon - t0) / dt)));

    SampledKernel out;
    out.dt = dt;
    out.t0 = t0;
    out.values.assign(n_out, 0.0);

    // Atom of the kernel-measure sits at time 0.
    if (g.atom_at_zero != 0.0) {
        const std::int64_t off = out.index_of(theta.t0);
        for (std::size_t i = 0; i < theta.values.size(); ++i) {
            const auto k = static_cast<std::size_t>(off) + i;
            if (k < n_out) out.values[k] += g.atom_at_zero * theta.values[i];
        }
        for (const auto& j : theta.jumps) out.add_jump(j.index + off, g.atom_at_zero * j.size);
    }

    // Density part: per-cell trapezoid masses of g (jump-aware right edges),
    // applied at cell midpoints.
    if (!g.values.empty()) {
        std::vector<double> masses(g.values.size(), 0.0);
        for (std::size_t i = 0; i < g.values.size(); ++i)
            masses[i] = 0.5 * dt * (g.values[i] + g.left_value(static_cast<std::int64_t>(i) + 1));

        const auto theta_half = half_grid_samples(theta);
        // out index k corresponds to time t0 + k dt; the contribution is
        // sum_i masses[i] * theta(t - g.t0 - (i + 1/2) dt) = conv[k - base].
        const std::int64_t base = out.index_of(theta.t0 + g.t0);
        const auto n_shift =
            static_cast<std::size_t>(static_cast<std::int64_t>(n_out) + std::max<std::int64_t>(-base, 0));
        std::vector<double> shifted_out(n_shift, 0.0);
        convolve_masses_against_half_samples(masses, theta_half, shifted_out);
        for (std::size_t k = 0; k < n_out; ++k) {
            const auto src = static_cast<std::int64_t>(k) - base;
            if (src >= 0 && src < static_cast<std::int64_t>(n_shift))
                out.values[k] += shifted_out[static_cast<std::size_t>(src)];
        }
    }

    out.sort_jumps();
    return out;
}

}  // namespace ctar
