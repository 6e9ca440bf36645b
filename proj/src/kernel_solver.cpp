#include "ctar/kernel_solver.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "ctar/fft.hpp"
#include "ctar/kernel_ops.hpp"
#include "ctar/simd/kernels.hpp"

namespace ctar::solver {

namespace {

using cplx = std::complex<double>;

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct LineScan {
    double min_abs = std::numeric_limits<double>::infinity();
    double argmin_y = 0.0;
    bool zero_nearby = false;  // some grid point has |h| <= 0.6 spacing (1 + |h'|)
};

// A zero of h within one scan cell of a grid point z forces
// |h(z)| <~ |h'(z)| * spacing, so this Newton-style proximity test is the
// scan's zero certificate (and its documented failure mode: zeros where h
// bends faster than its local derivative suggests).
LineScan scan_line(const CharacteristicFunction& h, double x, double y_max, int points,
                   double spacing) {
    LineScan scan;
    for (int j = 0; j < points; ++j) {
        const double y = y_max * static_cast<double>(j) / static_cast<double>(points - 1);
        const cplx z(x, y);
        const double v = std::abs(h(z));
        if (v < scan.min_abs) {
            scan.min_abs = v;
            scan.argmin_y = y;
        }
        if (v <= 0.6 * spacing * (1.0 + std::abs(h.derivative(z)))) scan.zero_nearby = true;
    }
    return scan;
}

}  // namespace

std::string StripReport::to_text() const {
    std::string s;
    s += "min_abs_h_on_axis = " + g17(min_abs_h_on_axis) + "\n";
    s += "a = " + g17(a) + "\n";
    s += "b = " + g17(b) + "\n";
    s += "c = " + g17(c) + "\n";
    s += std::string("causal = ") + (causal ? "true" : "false") + "\n";
    s += "scan_y_max = " + g17(y_max) + "\n";
    s += "scan_grid_points = " + std::to_string(grid_points) + "\n";
    s += "zero_tol_abs = " + g17(zero_tol_abs) + "\n";
    return s;
}

StripReport find_strip(const SignedMeasure& eta, const StripScanParams& params) {
    const CharacteristicFunction h{eta};
    const double tv = total_variation(eta);
    const double scale = 1.0 + tv;
    const double zero_tol_abs = params.zero_tol * scale;
    const double line_tol_abs = params.line_tol * scale;
    const double y_max = params.y_max > 0.0 ? params.y_max : 1.5 * scale;
    const double dy = y_max / static_cast<double>(params.y_points - 1);

    StripReport rep;
    rep.y_max = y_max;
    rep.grid_points = params.y_points;
    rep.zero_tol_abs = zero_tol_abs;

    // Axis scan.  |h(z)| >= |z| - |eta| for Re z <= 0, so zeros cannot hide
    // beyond |y| = |eta|; the default y_max covers that with margin.
    const auto axis = scan_line(h, 0.0, y_max, params.y_points, dy);
    rep.min_abs_h_on_axis = axis.min_abs;
    if (axis.min_abs <= zero_tol_abs || axis.zero_nearby)
        throw std::runtime_error(
            "characteristic function vanishes on axis at y = " + g17(axis.argmin_y) +
            (axis.argmin_y == 0.0
                 ? ": delay measure has zero total mass, see stationarity obstruction"
                 : ""));

    // Right edge: certified by column scans of (0, b]; only meaningful when
    // eta has an exponential moment (gamma rates bound the Laplace domain).
    const double cap = std::min(params.b_cap, 0.9 * eta.min_gamma_rate());
    double b = 0.0;
    if (cap > 0.0) {
        double hi = cap;
        for (int iter = 0; iter < params.max_shrink && hi > 1e-3; ++iter) {
            const double dx = hi / static_cast<double>(params.x_columns);
            bool clean = true;
            for (int col = 1; col <= params.x_columns && clean; ++col)
                clean = !scan_line(h, dx * col, y_max, params.y_points, std::max(dx, dy))
                             .zero_nearby;
            if (clean) {
                b = hi;
                break;
            }
            hi *= 0.5;
        }
    }
    rep.b = b;

    // Left edge: shrink toward 0 until the line Re = a stays bounded away
    // from zero and no interior column flags a zero.
    double a = params.a_init;
    bool found = false;
    for (int iter = 0; iter < params.max_shrink; ++iter) {
        const double dx = -a / 4.0;
        bool ok = scan_line(h, a, y_max, params.y_points, std::max(dx, dy)).min_abs > line_tol_abs;
        for (int col = 1; col < 4 && ok; ++col)
            ok = !scan_line(h, a * static_cast<double>(col) / 4.0, y_max, params.y_points,
                            std::max(dx, dy))
                      .zero_nearby;
        if (ok) {
            found = true;
            break;
        }
        a *= 0.5;
    }
    if (!found) throw std::runtime_error("could not certify a non-vanishing strip left of the axis");
    rep.a = a;

    // Inversion offset: half of the narrower certified side.  Keeping |c|
    // below the right edge bounds the dynamic range of e^{-cu} and keeps the
    // periodized tail of x0 e^{cu} decaying.
    rep.c = -0.5 * std::min(-a, b > 0.0 ? b : -a);

    // Causality certificate: zeros with Re z <= 0 must lie in |z| <= |eta|,
    // so a finite rectangle scan is decisive up to grid resolution.
    const double x_max = 1.25 * tv + 0.5 - a;
    const double dx = x_max / static_cast<double>(params.x_columns);
    bool causal = true;
    for (int col = 0; col <= params.x_columns && causal; ++col)
        causal = !scan_line(h, -dx * col, y_max, params.y_points, std::max(dx, dy)).zero_nearby;
    rep.causal = causal;
    return rep;
}

namespace {

// Jump reference r(t) = e^{rho (t - x)} on t >= x (causal) or
// r(t) = -e^{rho (t - x)} on t < x (anticausal).  Both transforms equal
// e^{zx} / (-rho - z); causal needs Re z < -rho, anticausal Re z > -rho.
struct JumpRef {
    double location = 0.0;
    double size = 1.0;
    double rho = 0.0;
    bool anticausal = false;

    cplx transform(cplx z) const {
        return size * std::exp(z * location) / (-rho - z);
    }
    double value(double t) const {
        if (anticausal) return t < location ? -size * std::exp(rho * (t - location)) : 0.0;
        return t >= location ? size * std::exp(rho * (t - location)) : 0.0;
    }
};

struct LineInversion {
    SampledKernel kernel;    // on [-T/2, T/2)
    double neg_l2_fraction;  // ||x||_{L2(t<0)} / ||x||_{L2}
};

// Inverse bilateral Laplace transform of G along Re z = c with known jumps:
// F = G - sum L[ref] is inverted by FFT (the jump-free remainder has an
// absolutely summable frequency tail, so sampling the line does not ring),
// references are added back in the time domain.
LineInversion invert_on_line(const std::function<cplx(cplx)>& G, double c, int log2_n, double dt,
                             const std::vector<JumpRef>& refs, double aliasing_tol) {
    const std::size_t n = std::size_t{1} << log2_n;
    const double window = static_cast<double>(n) * dt;
    const double dy = 2.0 * std::numbers::pi / window;

    std::vector<cplx> freq(n);
    for (std::size_t k = 0; k < n; ++k) {
        const auto m = static_cast<double>(k < n / 2 ? static_cast<std::int64_t>(k)
                                                     : static_cast<std::int64_t>(k) -
                                                           static_cast<std::int64_t>(n));
        const cplx z(c, dy * m);
        cplx v = G(z);
        for (const auto& r : refs) v -= r.transform(z);
        freq[k] = v;
    }

    // Spectral tail audit: the remainder must have decayed by the window edge.
    double head = 0.0, tail = 0.0;
    std::size_t n_head = 0, n_tail = 0;
    for (std::size_t k = 1; k < n / 32; ++k) {
        head += std::norm(freq[k]);
        ++n_head;
    }
    for (std::size_t k = 15 * (n / 32); k < 17 * (n / 32); ++k) {
        tail += std::norm(freq[k]);
        ++n_tail;
    }
    if (n_head > 0 && n_tail > 0 && tail / static_cast<double>(n_tail) >
                                        aliasing_tol * (head / static_cast<double>(n_head)))
        throw std::runtime_error("frequency window too small");

    fft::transform(freq, /*inverse=*/false);

    SampledKernel out;
    out.dt = dt;
    out.t0 = -0.5 * window;
    out.values.assign(n, 0.0);
    const double norm = 1.0 / (static_cast<double>(n) * dt);
    double neg_sq = 0.0, tot_sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto j = (i + n / 2) % n;  // time order -> DFT order
        const double u = out.t0 + dt * static_cast<double>(i);
        double v = freq[j].real() * norm * std::exp(-c * u);
        for (const auto& r : refs) v += r.value(u);
        out.values[i] = v;
        tot_sq += v * v;
        if (u < 0.0) neg_sq += v * v;
    }
    for (const auto& r : refs) out.add_jump(out.index_of(r.location), r.size);
    out.sort_jumps();

    LineInversion res;
    res.neg_l2_fraction = tot_sq > 0.0 ? std::sqrt(neg_sq / tot_sq) : 0.0;
    res.kernel = std::move(out);
    return res;
}

}  // namespace

SampledKernel solve_x0(const SignedMeasure& eta, const StripReport& strip, const SolveGrid& grid) {
    const CharacteristicFunction h{eta};
    const double c = strip.c;
    if (!(c < 0.0)) throw std::invalid_argument("inversion offset must be negative");

    // Reference exponent: matching the atom of eta at the origin cancels the
    // leading 1/z^2 term of L[x0] - L[ref], which keeps the reweighted fold
    // error flat across the window.
    const double j0 = eta.weight_at_zero();
    JumpRef ref;
    ref.location = 0.0;
    ref.size = 1.0;
    if (j0 <= 0.0) {
        ref.rho = j0;  // causal reference, valid for Re z < |j0|
    } else if (j0 > -2.0 * c) {
        ref.rho = j0;
        ref.anticausal = true;  // valid for Re z > -j0
    } else {
        ref.rho = 0.0;  // Heaviside fallback; the small uncancelled term is O(j0)
    }

    auto res = invert_on_line([&](cplx z) { return 1.0 / h(z); }, c, grid.log2_n, grid.dt, {ref},
                              grid.aliasing_tol);
    SampledKernel out;
    if (strip.causal) {
        if (res.neg_l2_fraction > grid.causality_tol)
            throw std::runtime_error("causality violated: inversion inconsistent");
        out = res.kernel.clipped(0.0, -res.kernel.t0);
    } else {
        out = std::move(res.kernel);
    }
    // The reweighting e^{-cu} amplifies spectral-fold noise toward the right
    // window edge; a kernel whose trailing sixteenth still carries L2 mass is
    // either corrupted by that amplification or truncated mid-decay.
    const std::size_t tail_n = out.values.size() / 16;
    if (tail_n > 0) {
        const double total = simd::sumsq(out.values.data(), out.values.size());
        const double tail = simd::sumsq(out.values.data() + (out.values.size() - tail_n), tail_n);
        if (total > 0.0 && std::sqrt(tail / total) > grid.tail_tol)
            throw std::runtime_error(
                "time window too short for the kernel tail: shrink dt or raise log2_n");
    }
    return out;
}

namespace {

// Density of x0(du) minus its unit atom: D(u) = \int x0(u - v) eta(dv),
// restricted to a window starting at x0.t0.
SampledKernel resolvent_density(const SampledKernel& x0, const SignedMeasure& eta,
                                double extra_horizon) {
    const double window =
        x0.dt * static_cast<double>(x0.values.size()) + extra_horizon;
    return convolve_with_measure(x0, eta, window, 1e-10);
}

}  // namespace

double resolvent_residual(const SampledKernel& x0, const SignedMeasure& eta) {
    const SampledKernel d = resolvent_density(x0, eta, 0.0);
    const SampledKernel cum = cumulative_integral(d);
    double worst = 0.0;
    for (std::size_t i = 0; i < x0.values.size(); ++i) {
        const double t = x0.time_at(static_cast<std::int64_t>(i));
        const double indicator = t >= -0.5 * x0.dt ? 1.0 : 0.0;
        const double r = x0.values[i] - indicator - cum.values[i];
        worst = std::max(worst, std::fabs(r));
    }
    return worst;
}

double mass_identity(const SampledKernel& x0, const SignedMeasure& eta) {
    const SampledKernel d = resolvent_density(x0, eta, delay_horizon(eta, 1e-10));
    return integrate(d);
}

SampledKernel x0_measure(const SampledKernel& x0, const SignedMeasure& eta) {
    SampledKernel d = resolvent_density(x0, eta, delay_horizon(eta, 1e-10));
    d.atom_at_zero = 1.0;
    return d;
}

SampledKernel domination_measure(const SampledKernel& x0, const SignedMeasure& eta) {
    SampledKernel abs_x0 = x0;
    for (std::size_t i = 0; i < abs_x0.values.size(); ++i)
        abs_x0.values[i] = std::fabs(abs_x0.values[i]);
    abs_x0.jumps.clear();
    for (const auto& j : x0.jumps) {
        const bool inside = j.index >= 0 && j.index < static_cast<std::int64_t>(x0.values.size());
        const double right = inside ? std::fabs(x0.values[static_cast<std::size_t>(j.index)]) : 0.0;
        const double left = std::fabs(x0.left_value(j.index));
        abs_x0.add_jump(j.index, right - left);
    }
    abs_x0.sort_jumps();
    return resolvent_density(abs_x0, eta.absolute(), delay_horizon(eta, 1e-10));
}

SampledKernel convolve_kernel_with_x0_measure(const SampledKernel& theta,
                                              const SampledKernel& x0m, double out_horizon) {
    for (double v : theta.values)
        if (!std::isfinite(v)) throw std::runtime_error("theta not integrable w.r.t. x0(du)");
    SampledKernel out = convolve_with_kernel_measure(theta, x0m, out_horizon);
    for (double v : out.values)
        if (!std::isfinite(v)) throw std::runtime_error("theta not integrable w.r.t. x0(du)");
    return out;
}

namespace {

void validate_level_measure(const SignedMeasure& phi) {
    for (const auto& a : phi.atoms)
        if (a.location <= 0.0 && a.weight != 0.0)
            throw std::invalid_argument("level measure must be concentrated on (0, inf)");
}

}  // namespace

SampledKernel level_kernel_series(const SampledKernel& theta, const SignedMeasure& phi, double tol,
                                  double out_horizon) {
    validate_level_measure(phi);
    const double rho = total_variation(phi);
    if (rho >= 1.0)
        throw std::runtime_error(
            "contraction condition violated: |phi|((0,inf)) >= 1; use the transform route");

    const double theta_l2 = theta.l2_norm();

    SampledKernel psi;
    psi.dt = theta.dt;
    psi.t0 = theta.t0;
    const auto n_out = static_cast<std::size_t>(std::llround((out_horizon - theta.t0) / theta.dt));
    psi.values.assign(n_out, 0.0);
    for (std::size_t i = 0; i < theta.values.size() && i < n_out; ++i)
        psi.values[i] = theta.values[i];
    psi.jumps = theta.jumps;
    psi.atom_at_zero = 0.0;

    SampledKernel term = theta;
    for (int n = 1; n < 100000; ++n) {
        // A-priori geometric tail bound (Young's inequality per convolution).
        if (rho <= 0.0 || theta_l2 * std::pow(rho, n) / (1.0 - rho) < tol) break;
        term = convolve_with_measure(term, phi, out_horizon - theta.t0, 1e-12);
        if (term.values.size() > n_out) term.values.resize(n_out);
        simd::axpy(1.0, term.values.data(), psi.values.data(), term.values.size());
        for (const auto& j : term.jumps)
            if (j.index < static_cast<std::int64_t>(n_out)) psi.add_jump(j.index, j.size);
    }
    psi.sort_jumps();
    return psi;
}

SampledKernel level_kernel_transform(const SampledKernel& theta, const SignedMeasure& phi,
                                     const LevelTransformParams& params) {
    validate_level_measure(phi);
    if (!(params.a < 0.0))
        throw std::invalid_argument("level transform needs a strip edge a < 0");
    const double dt = params.dt;
    const std::size_t n = std::size_t{1} << params.log2_n;
    const double window = static_cast<double>(n) * dt;
    const double c = 0.5 * params.a;

    // Denominator audit over a fan of offsets approaching the axis; a zero of
    // 1 - L[phi] at or near the boundary blocks the representation.
    const double y_span = std::numbers::pi / dt;
    for (int m = 0; m < params.offset_scans; ++m) {
        const double x = params.a / std::pow(2.0, m);
        double worst = std::numeric_limits<double>::infinity();
        for (int j = 0; j < params.y_points; ++j) {
            const double y = y_span * static_cast<double>(j) / (params.y_points - 1);
            worst = std::min(worst, std::abs(1.0 - laplace(phi, cplx(x, y))));
        }
        if (worst <= params.denom_tol)
            throw std::runtime_error("1 - L[phi] vanishes in strip");
    }

    // Jump set of psi: theta's jumps propagated through the atomic part of
    // phi (psi = theta + psi * phi pushes every jump right by each atom).
    std::map<std::int64_t, double> jump_sizes;
    std::vector<std::pair<std::int64_t, double>> queue;
    for (const auto& j : theta.jumps) {
        const auto idx = j.index + static_cast<std::int64_t>(std::llround(theta.t0 / dt));
        jump_sizes[idx] += j.size;
        queue.emplace_back(idx, j.size);
    }
    double atom_tv = 0.0;
    for (const auto& a : phi.atoms) atom_tv += std::fabs(a.weight);
    const double jump_drop = 1e-13;
    if (atom_tv < 1.0) {
        std::size_t head = 0;
        while (head < queue.size() && queue.size() < 100000) {
            const auto [idx, size] = queue[head++];
            for (const auto& a : phi.atoms) {
                const double cells = a.location / dt;
                if (std::fabs(cells - std::round(cells)) > 1e-9)
                    throw std::invalid_argument(
                        "transform route requires grid-aligned level atoms");
                const auto nidx = idx + static_cast<std::int64_t>(std::llround(cells));
                const double nsize = size * a.weight;
                if (std::fabs(nsize) < jump_drop) continue;
                if (static_cast<double>(nidx) * dt > 0.5 * window) continue;
                jump_sizes[nidx] += nsize;
                queue.emplace_back(nidx, nsize);
            }
        }
    }

    std::vector<JumpRef> refs;
    for (const auto& [idx, size] : jump_sizes) {
        if (std::fabs(size) < jump_drop) continue;
        JumpRef r;
        r.location = static_cast<double>(idx) * dt;
        r.size = size;
        r.rho = 0.0;  // Heaviside references; jump sizes sum to ~0 for decaying kernels
        refs.push_back(r);
    }

    // L[theta] on the line: analytic staircase part plus an FFT of the
    // continuous remainder (rectangle rule; the integrand vanishes at both
    // window ends, so this is trapezoid-accurate).
    std::vector<cplx> theta_cont(n, cplx(0.0, 0.0));
    {
        // Right-continuous staircase built from theta's jumps.
        std::vector<std::pair<double, double>> stairs;  // (time, size)
        for (const auto& j : theta.jumps)
            stairs.emplace_back(theta.time_at(j.index), j.size);
        std::sort(stairs.begin(), stairs.end());
        for (std::size_t i = 0; i < n; ++i) {
            const auto idx_time = static_cast<std::int64_t>(i < n / 2
                                                                ? static_cast<std::int64_t>(i)
                                                                : static_cast<std::int64_t>(i) -
                                                                      static_cast<std::int64_t>(n));
            const double u = dt * static_cast<double>(idx_time);
            double stair = 0.0;
            for (const auto& [x, s] : stairs)
                if (u >= x - 0.5 * dt) stair += s;
            const double v = theta.value_at(u) - stair;
            theta_cont[i] = v * std::exp(c * u);
        }
        fft::transform(theta_cont, /*inverse=*/true);
        const double f = dt * static_cast<double>(n);
        for (auto& z : theta_cont) z *= f;
    }

    auto theta_transform = [&](std::size_t k, cplx z) {
        cplx v = theta_cont[k];
        for (const auto& j : theta.jumps) {
            const double x = theta.time_at(j.index);
            v += j.size * std::exp(z * x) * (-1.0 / z);
        }
        return v;
    };

    const double dy = 2.0 * std::numbers::pi / window;
    std::vector<cplx> freq(n);
    for (std::size_t k = 0; k < n; ++k) {
        const auto m = static_cast<double>(k < n / 2 ? static_cast<std::int64_t>(k)
                                                     : static_cast<std::int64_t>(k) -
                                                           static_cast<std::int64_t>(n));
        const cplx z(c, dy * m);
        cplx v = theta_transform(k, z) / (1.0 - laplace(phi, z));
        for (const auto& r : refs) v -= r.transform(z);
        freq[k] = v;
    }

    fft::transform(freq, /*inverse=*/false);

    SampledKernel psi;
    psi.dt = dt;
    psi.t0 = -0.5 * window;
    psi.values.assign(n, 0.0);
    const double norm = 1.0 / (static_cast<double>(n) * dt);
    double neg_sq = 0.0, tot_sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto j = (i + n / 2) % n;
        const double u = psi.t0 + dt * static_cast<double>(i);
        double v = freq[j].real() * norm * std::exp(-c * u);
        for (const auto& r : refs) v += r.value(u);
        psi.values[i] = v;
        tot_sq += v * v;
        if (u < 0.0) neg_sq += v * v;
    }
    if (tot_sq > 0.0 && std::sqrt(neg_sq / tot_sq) > 1e-3)
        throw std::runtime_error("level transform produced mass at negative times");
    for (const auto& r : refs) psi.add_jump(psi.index_of(r.location), r.size);
    psi.sort_jumps();
    SampledKernel out = psi.clipped(0.0, 0.5 * window);
    const std::size_t tail_n = out.values.size() / 16;
    if (tail_n > 0) {
        const double total = simd::sumsq(out.values.data(), out.values.size());
        const double tail = simd::sumsq(out.values.data() + (out.values.size() - tail_n), tail_n);
        if (total > 0.0 && std::sqrt(tail / total) > 3e-3)
            throw std::runtime_error(
                "time window too short for the level kernel tail: shrink dt or raise log2_n");
    }
    return out;
}

double level_fixed_point_residual(const SampledKernel& psi, const SignedMeasure& phi,
                                  const SampledKernel& theta) {
    const double window = psi.dt * static_cast<double>(psi.values.size());
    const SampledKernel conv = convolve_with_measure(psi, phi, window, 1e-10);
    double worst = 0.0;
    for (std::size_t i = 0; i < psi.values.size(); ++i) {
        const double t = psi.time_at(static_cast<std::int64_t>(i));
        const double r = psi.values[i] - (i < conv.values.size() ? conv.values[i] : 0.0) -
                         theta.value_at(t);
        worst = std::max(worst, std::fabs(r));
    }
    return worst;
}

double increment_contraction_norm(const SignedMeasure& eta) {
    const double horizon = delay_horizon(eta, 1e-12);
    const double dt = 1.0 / 256.0;
    const auto n = static_cast<std::size_t>(std::llround(std::ceil(horizon / dt))) + 1;
    double s = 0.0;
    double prev = std::fabs(cdf(eta, 0.0));
    for (std::size_t i = 1; i < n; ++i) {
        const double cur = std::fabs(cdf(eta, dt * static_cast<double>(i)));
        s += 0.5 * dt * (prev + cur);
        prev = cur;
    }
    return s;
}

SampledKernel increment_solution_kernel(const SampledKernel& f, const SignedMeasure& eta, double s,
                                        double tol, double out_horizon) {
    for (const auto& a : eta.atoms)
        if (a.weight != 0.0)
            throw std::invalid_argument("increment route requires an absolutely continuous eta");
    if (std::fabs(total_mass(eta)) > 1e-9 * (1.0 + total_variation(eta)))
        throw std::runtime_error("use the stationary SDDE route");
    if (increment_contraction_norm(eta) >= 1.0)
        throw std::runtime_error("increment contraction fails");

    // phi(du) = F_eta(u) du on the grid.
    const double dt = f.dt;
    const double horizon = delay_horizon(eta, 1e-12);
    const auto n_phi = static_cast<std::size_t>(std::llround(std::ceil(horizon / dt)));
    GridDensity gd;
    gd.dt = dt;
    gd.values.resize(n_phi);
    for (std::size_t i = 0; i < n_phi; ++i)
        gd.values[i] = cdf(eta, dt * static_cast<double>(i));
    SignedMeasure phi;
    phi.grid_density = std::move(gd);

    const SampledKernel theta_s = linear_combination(1.0, f, -1.0, f.shifted(s));
    return level_kernel_series(theta_s, phi, tol, out_horizon);
}

}  // namespace ctar::solver
