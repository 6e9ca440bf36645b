#include "ctar/sampled_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ctar/simd/kernels.hpp"

namespace ctar {

std::int64_t SampledKernel::index_of(double t, double tol) const {
    const double x = (t - t0) / dt;
    const double r = std::round(x);
    if (std::fabs(x - r) > tol)
        throw std::invalid_argument("time is not grid-aligned: t=" + std::to_string(t));
    return static_cast<std::int64_t>(r);
}

bool SampledKernel::is_grid_aligned(double t, double tol) const {
    const double x = (t - t0) / dt;
    return std::fabs(x - std::round(x)) <= tol;
}

double SampledKernel::jump_at_index(std::int64_t i) const {
    double s = 0;
    for (const auto& j : jumps)
        if (j.index == i) s += j.size;
    return s;
}

double SampledKernel::left_value(std::int64_t i) const {
    double v = 0.0;
    if (i >= 0 && i < static_cast<std::int64_t>(values.size()))
        v = values[static_cast<std::size_t>(i)];
    return v - jump_at_index(i);
}

double SampledKernel::value_at(double t) const {
    const double x = (t - t0) / dt;
    if (x < 0.0 || values.empty()) return 0.0;
    if (x >= static_cast<double>(values.size())) return 0.0;
    const auto i = static_cast<std::size_t>(x);
    const double frac = x - static_cast<double>(i);
    if (frac < 1e-12) return values[i];
    // Interpolate toward the left limit at the next grid point so the cell
    // does not smear a discontinuity sitting on its right edge.
    const double right = left_value(static_cast<std::int64_t>(i) + 1);
    return values[i] + frac * (right - values[i]);
}

double SampledKernel::l1_norm() const { return dt * simd::sumabs(values.data(), values.size()); }
double SampledKernel::l2_norm() const {
    return std::sqrt(dt * simd::sumsq(values.data(), values.size()));
}
double SampledKernel::sup_norm() const { return simd::max_abs(values.data(), values.size()); }

SampledKernel SampledKernel::shifted(double shift) const {
    SampledKernel out = *this;
    out.t0 += shift;
    return out;
}

SampledKernel SampledKernel::clipped(double t_lo, double t_hi) const {
    const std::int64_t lo = index_of(t_lo);
    const std::int64_t hi = index_of(t_hi);
    if (hi < lo) throw std::invalid_argument("clip window is empty");
    SampledKernel out;
    out.dt = dt;
    out.t0 = t_lo;
    out.atom_at_zero = atom_at_zero;
    const auto n = static_cast<std::int64_t>(values.size());
    out.values.resize(static_cast<std::size_t>(hi - lo), 0.0);
    for (std::int64_t i = lo; i < hi; ++i)
        if (i >= 0 && i < n) out.values[static_cast<std::size_t>(i - lo)] = values[static_cast<std::size_t>(i)];
    for (const auto& j : jumps)
        if (j.index >= lo && j.index < hi) out.jumps.push_back({j.index - lo, j.size});
    return out;
}

SampledKernel SampledKernel::trimmed_tail(double rel_tol) const {
    const double total = dt * simd::sumsq(values.data(), values.size());
    if (total <= 0.0) return *this;
    double tail = 0.0;
    std::size_t keep = values.size();
    while (keep > 1) {
        const double v = values[keep - 1];
        tail += dt * v * v;
        if (tail > rel_tol * rel_tol * total) break;
        --keep;
    }
    SampledKernel out = *this;
    out.values.resize(keep);
    out.jumps.clear();
    for (const auto& j : jumps)
        if (j.index < static_cast<std::int64_t>(keep)) out.jumps.push_back(j);
    return out;
}

void SampledKernel::add_jump(std::int64_t index, double size) {
    if (size == 0.0) return;
    for (auto& j : jumps) {
        if (j.index == index) {
            j.size += size;
            return;
        }
    }
    jumps.push_back({index, size});
}

void SampledKernel::sort_jumps() {
    std::sort(jumps.begin(), jumps.end(),
              [](const Jump& a, const Jump& b) { return a.index < b.index; });
}

SampledKernel linear_combination(double a, const SampledKernel& f, double b,
                                 const SampledKernel& g) {
    if (f.dt != g.dt) throw std::invalid_argument("grid step mismatch");
    const double t_lo = std::min(f.t0, g.t0);
    const double t_hi = std::max(f.end_time(), g.end_time());
    SampledKernel out;
    out.dt = f.dt;
    out.t0 = t_lo;
    const auto n = static_cast<std::size_t>(std::llround((t_hi - t_lo) / f.dt));
    out.values.assign(n, 0.0);
    const std::int64_t off_f = out.index_of(f.t0);
    const std::int64_t off_g = out.index_of(g.t0);
    for (std::size_t i = 0; i < f.values.size(); ++i)
        out.values[static_cast<std::size_t>(off_f) + i] += a * f.values[i];
    for (std::size_t i = 0; i < g.values.size(); ++i)
        out.values[static_cast<std::size_t>(off_g) + i] += b * g.values[i];
    for (const auto& j : f.jumps) out.add_jump(j.index + off_f, a * j.size);
    for (const auto& j : g.jumps) out.add_jump(j.index + off_g, b * j.size);
    out.sort_jumps();
    return out;
}

SampledKernel cumulative_integral(const SampledKernel& f) {
    SampledKernel out;
    out.dt = f.dt;
    out.t0 = f.t0;
    out.values.assign(f.values.size(), 0.0);
    double acc = 0.0;
    for (std::size_t i = 1; i < f.values.size(); ++i) {
        const double right = f.left_value(static_cast<std::int64_t>(i));
        acc += 0.5 * f.dt * (f.values[i - 1] + right);
        out.values[i] = acc;
    }
    return out;
}

double integrate(const SampledKernel& f) {
    if (f.values.empty()) return 0.0;
    // Trapezoid over the n cells [t_i, t_{i+1}) with jump-aware right edges,
    // equal to sum_i (values[i] + left_value(i+1)) / 2 * dt.  A trailing jump
    // recorded at index n marks support extending through the final cell.
    double s = simd::sum(f.values.data(), f.values.size());
    s -= 0.5 * f.values.front();
    for (const auto& j : f.jumps) {
        if (j.index > 0 && j.index <= static_cast<std::int64_t>(f.values.size()))
            s -= 0.5 * j.size;
    }
    return s * f.dt;
}

double grid_l2_distance(const SampledKernel& f, const SampledKernel& g) {
    const SampledKernel d = linear_combination(1.0, f, -1.0, g);
    return d.l2_norm();
}

double grid_sup_distance(const SampledKernel& f, const SampledKernel& g) {
    const SampledKernel d = linear_combination(1.0, f, -1.0, g);
    return d.sup_norm();
}

std::vector<double> half_grid_samples(const SampledKernel& f) {
    if (f.values.empty()) return {};
    std::vector<double> out(f.values.size(), 0.0);
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        const double right = f.left_value(static_cast<std::int64_t>(i) + 1);
        out[i] = 0.5 * (f.values[i] + right);
    }
    return out;
}

}  // namespace ctar
