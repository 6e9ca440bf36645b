#include "ctar/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ctar/rng.hpp"
#include "ctar/simd/kernels.hpp"

namespace ctar::sim {

double JumpPart::second_moment() const {
    switch (law) {
        case Law::none: return 0.0;
        case Law::centered_normal: return param;
        case Law::two_point: return param * param;
    }
    return 0.0;
}

double LevyDriver::second_moment() const {
    return gaussian_var + jumps.rate * jumps.second_moment();
}

std::string LevyDriver::describe() const {
    std::string s = "gaussian_var=" + std::to_string(gaussian_var);
    switch (jumps.law) {
        case JumpPart::Law::none: break;
        case JumpPart::Law::centered_normal:
            s += " jumps=normal(rate=" + std::to_string(jumps.rate) +
                 ",var=" + std::to_string(jumps.param) + ")";
            break;
        case JumpPart::Law::two_point:
            s += " jumps=two_point(rate=" + std::to_string(jumps.rate) +
                 ",size=" + std::to_string(jumps.param) + ")";
            break;
    }
    return s;
}

IntegrabilityReport integrability_check(const SampledKernel& f, const LevyDriver& driver) {
    IntegrabilityReport rep;
    double acc = 0.0;
    const double sigma2 = driver.gaussian_var;
    const auto half = half_grid_samples(f);  // midpoint rule over cells

    // Precomputed Gauss-like grid for the centered-normal jump law.
    const int quad_n = 200;
    std::vector<double> xs, ws;
    if (driver.jumps.law == JumpPart::Law::centered_normal && driver.jumps.rate > 0.0) {
        const double sd = std::sqrt(driver.jumps.param);
        const double span = 8.0 * sd;
        const double h = span / quad_n;
        for (int i = 0; i <= quad_n; ++i) {
            const double x = -0.5 * span + h * static_cast<double>(i);
            const double w = (i == 0 || i == quad_n) ? 0.5 : 1.0;
            xs.push_back(x);
            ws.push_back(w * h * std::exp(-0.5 * x * x / driver.jumps.param) /
                         std::sqrt(2.0 * std::numbers::pi * driver.jumps.param));
        }
    }

    for (double v : half) {
        double cell = v * v * sigma2;
        const double g = std::fabs(v);
        switch (driver.jumps.law) {
            case JumpPart::Law::none: break;
            case JumpPart::Law::two_point: {
                const double y = driver.jumps.param * g;
                cell += driver.jumps.rate * std::min(y * y, y);
                break;
            }
            case JumpPart::Law::centered_normal: {
                double e = 0.0;
                for (std::size_t i = 0; i < xs.size(); ++i) {
                    const double y = std::fabs(xs[i]) * g;
                    e += ws[i] * std::min(y * y, y);
                }
                cell += driver.jumps.rate * e;
                break;
            }
        }
        acc += cell * f.dt;
    }
    rep.value = acc;
    rep.pass = std::isfinite(acc);
    return rep;
}

PathSample simulate_increments(const LevyDriver& driver, double dt, std::size_t n, double t_start,
                               std::uint64_t seed, std::uint32_t stream) {
    if (n == 0) throw std::invalid_argument("need at least one increment");
    const rng::CounterStream rs(seed, stream);
    PathSample out;
    out.dt = dt;
    out.t_start = t_start;
    out.seed = seed;
    out.stream = stream;
    out.driver_desc = driver.describe();
    out.values.resize(n);
    const double gauss_sd = std::sqrt(driver.gaussian_var * dt);
    const double jump_mean = driver.jumps.rate * dt;
    for (std::size_t j = 0; j < n; ++j) {
        double x = gauss_sd != 0.0 ? gauss_sd * rs.normal(j, 0) : 0.0;
        if (driver.jumps.law != JumpPart::Law::none && driver.jumps.rate > 0.0) {
            const int m = rs.poisson(jump_mean, j);
            for (int k = 0; k < m; ++k) {
                if (driver.jumps.law == JumpPart::Law::centered_normal) {
                    x += std::sqrt(driver.jumps.param) * rs.normal(j, 1 + static_cast<std::uint32_t>(k));
                } else {
                    x += rs.uniform(j, static_cast<std::uint32_t>(k)) < 0.5 ? driver.jumps.param
                                                                            : -driver.jumps.param;
                }
            }
        }
        out.values[j] = x;
    }
    return out;
}

PathSample moving_average_path(const SampledKernel& psi, const PathSample& increments,
                               double truncation_tol) {
    if (std::fabs(psi.dt - increments.dt) > 1e-12)
        throw std::invalid_argument("kernel and increment grids must share dt");
    if (psi.values.empty()) throw std::invalid_argument("kernel support is empty");
    const double dt = psi.dt;

    // Truncation audit: L2 mass of the trailing 1/16 of the stored support.
    // Kernels whose support genuinely terminates mark it with a closing jump
    // at the window edge and are exempt.
    const bool support_terminates =
        std::fabs(psi.jump_at_index(static_cast<std::int64_t>(psi.values.size())) +
                  psi.values.back()) < 1e-12 * (1.0 + std::fabs(psi.values.back()));
    if (!support_terminates) {
        const double total = simd::sumsq(psi.values.data(), psi.values.size());
        const std::size_t tail_n = std::max<std::size_t>(1, psi.values.size() / 16);
        const double tail =
            simd::sumsq(psi.values.data() + (psi.values.size() - tail_n), tail_n);
        if (total > 0.0 && std::sqrt(tail / total) > truncation_tol)
            throw std::runtime_error("kernel horizon too short");
    }

    // Tap i multiplies dL_{k-i}.  Taps are the kernel's left limits at lag
    // i dt -- the value governing the increment cell (t - i dt, t - (i-1) dt]
    // -- which keeps staircase kernels exact on commensurate grids and makes
    // the lag-0 tap of a causal kernel vanish (non-anticipative rule).
    const auto first_idx = static_cast<std::int64_t>(std::llround(psi.t0 / dt));
    const std::int64_t i_lo = psi.t0 >= 0.0 ? std::max<std::int64_t>(first_idx, 1) : first_idx;
    const std::int64_t i_hi = first_idx + static_cast<std::int64_t>(psi.values.size());
    if (i_hi < i_lo) throw std::invalid_argument("kernel support is empty");

    const auto m = static_cast<std::size_t>(i_hi - i_lo + 1);
    std::vector<double> taps_rev(m);
    for (std::size_t j = 0; j < m; ++j) {
        const std::int64_t i = i_hi - static_cast<std::int64_t>(j);
        taps_rev[j] = psi.left_value(i - first_idx);
    }

    const auto n = static_cast<std::int64_t>(increments.values.size());
    // X_k = sum_j dL[k - i_hi + j] taps_rev[j]; valid while indices stay in range.
    const std::int64_t k_first = std::max<std::int64_t>(i_hi, 0);
    const std::int64_t k_last = std::min<std::int64_t>(n - 1 + i_lo, n - 1);
    if (k_last < k_first) throw std::runtime_error("kernel horizon too short");

    PathSample out;
    out.dt = dt;
    out.t_start = increments.t_start + dt * static_cast<double>(k_first);
    out.seed = increments.seed;
    out.stream = increments.stream;
    out.driver_desc = increments.driver_desc;
    out.values.resize(static_cast<std::size_t>(k_last - k_first + 1));
    for (std::int64_t k = k_first; k <= k_last; ++k) {
        const double* base = increments.values.data() + (k - i_hi);
        out.values[static_cast<std::size_t>(k - k_first)] = simd::dot(base, taps_rev.data(), m);
    }
    return out;
}

PathSample euler_sdde_path(const SignedMeasure& eta, const PathSample& noise,
                           const PathSample& init) {
    const double dt = noise.dt;
    if (std::fabs(init.dt - dt) > 1e-12)
        throw std::invalid_argument("history and noise grids must share dt");
    if (init.values.empty()) throw std::invalid_argument("insufficient history");
    const double init_end = init.t_start + dt * static_cast<double>(init.values.size() - 1);
    if (std::fabs(init_end - noise.t_start) > 1e-9 * std::max(1.0, std::fabs(noise.t_start)))
        throw std::invalid_argument("history must end at the first noise time");

    // Delay weights on integer lags: atoms at aligned lags plus density cell
    // masses split to the bracketing grid points (midpoint rule).
    const double horizon = delay_horizon(eta, 1e-9);
    const auto m_cells = static_cast<std::size_t>(std::llround(std::ceil(horizon / dt)));
    std::vector<double> w(m_cells + 1, 0.0);
    if (eta.has_density()) {
        const auto masses = density_cell_masses(eta, dt, m_cells);
        for (std::size_t i = 0; i < m_cells; ++i) {
            w[i] += 0.5 * masses[i];
            w[i + 1] += 0.5 * masses[i];
        }
    }
    for (const auto& a : eta.atoms) {
        const double cells = a.location / dt;
        if (std::fabs(cells - std::round(cells)) > 1e-9)
            throw std::invalid_argument("euler scheme requires grid-aligned delay atoms");
        const auto idx = static_cast<std::size_t>(std::llround(cells));
        if (idx >= w.size()) w.resize(idx + 1, 0.0);
        w[idx] += a.weight;
    }
    std::vector<double> w_rev(w.rbegin(), w.rend());
    const std::size_t lag_n = w.size();

    if (init.values.size() < lag_n) throw std::invalid_argument("insufficient history");

    const std::size_t n = noise.values.size();
    std::vector<double> x(init.values.size() + n);
    std::copy(init.values.begin(), init.values.end(), x.begin());
    const std::size_t base = init.values.size() - 1;  // index of X(t0)
    for (std::size_t k = 0; k < n; ++k) {
        const double* window = x.data() + (base + k) - (lag_n - 1);
        const double drift = simd::dot(window, w_rev.data(), lag_n);
        x[base + k + 1] = x[base + k] + dt * drift + noise.values[k];
    }

    PathSample out;
    out.dt = dt;
    out.t_start = noise.t_start;
    out.seed = noise.seed;
    out.stream = noise.stream;
    out.driver_desc = noise.driver_desc;
    out.values.assign(x.begin() + static_cast<std::ptrdiff_t>(base), x.end());
    return out;
}

PathSample fractional_noise_increments(double d, const LevyDriver& driver, double dt,
                                       std::size_t n, double t_start, std::uint64_t seed,
                                       std::uint32_t stream, double max_lag, double horizon_tol) {
    if (!(d > 0.0 && d < 0.5))
        throw std::invalid_argument("fractional exponent must lie in (0, 1/2)");
    const auto m = static_cast<std::size_t>(std::llround(max_lag / dt));
    const double norm = 1.0 / std::tgamma(1.0 + d);
    std::vector<double> taps_rev(m);  // taps_rev[j] = delta theta at lag m - j
    double energy = 0.0;
    for (std::size_t i = 1; i <= m; ++i) {
        const double hi = std::pow(dt * static_cast<double>(i), d);
        const double lo = std::pow(dt * static_cast<double>(i - 1), d);
        const double tap = (hi - lo) * norm;
        taps_rev[m - i] = tap;
        energy += tap * tap;
    }
    // Tail audit: integral estimate of sum_{i>m} tap_i^2.
    const double dcoef = d * norm;
    const double tail = dcoef * dcoef * dt * std::pow(max_lag, 2.0 * d - 1.0) / (1.0 - 2.0 * d);
    if (tail > horizon_tol * energy)
        throw std::runtime_error("fractional increment horizon audit failed");

    const auto base = simulate_increments(driver, dt, n + m, t_start - dt * static_cast<double>(m),
                                          seed, stream);
    PathSample out;
    out.dt = dt;
    out.t_start = t_start;
    out.seed = seed;
    out.stream = stream;
    out.driver_desc = base.driver_desc + " fractional_d=" + std::to_string(d);
    out.values.resize(n);
    for (std::size_t k = 0; k < n; ++k)
        out.values[k] = simd::dot(base.values.data() + k, taps_rev.data(), m);
    return out;
}

}  // namespace ctar::sim
