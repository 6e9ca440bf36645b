#include "ctar/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "ctar/simd/kernels.hpp"

namespace ctar::stats {

AcfCurve theoretical_acf(const SampledKernel& psi, double second_moment,
                         const std::vector<double>& lags) {
    AcfCurve curve;
    curve.kind = AcfCurve::Kind::theoretical;
    curve.second_moment = second_moment;
    curve.lags = lags;
    curve.values.resize(lags.size());
    const auto n = psi.values.size();
    for (std::size_t li = 0; li < lags.size(); ++li) {
        const double cells = lags[li] / psi.dt;
        if (std::fabs(cells - std::round(cells)) > 1e-9)
            throw std::invalid_argument("acf lags must be grid lags");
        const auto lag = static_cast<std::size_t>(std::llround(cells));
        if (lag >= n) {
            curve.values[li] = 0.0;
            continue;
        }
        const std::size_t m = n - lag;
        // Trapezoid over the overlap [0, m dt] with jump-aware edges: the
        // product of right-continuous samples jumps wherever either factor
        // does, and the closing cell at i = m picks up terminating supports.
        auto right_at = [&](std::int64_t i) {
            if (i < 0 || i >= static_cast<std::int64_t>(n)) return 0.0;
            const auto iu = static_cast<std::size_t>(i);
            const double other = iu + lag < n ? psi.values[iu + lag] : 0.0;
            return psi.values[iu] * other;
        };
        auto left_at = [&](std::int64_t i) {
            return psi.left_value(i) * psi.left_value(i + static_cast<std::int64_t>(lag));
        };
        double s = simd::dot(psi.values.data(), psi.values.data() + lag, m);
        s -= 0.5 * psi.values[0] * psi.values[lag];
        std::vector<std::int64_t> cands{static_cast<std::int64_t>(m)};
        for (const auto& j : psi.jumps) {
            cands.push_back(j.index);
            cands.push_back(j.index - static_cast<std::int64_t>(lag));
        }
        std::sort(cands.begin(), cands.end());
        cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
        for (std::int64_t i : cands) {
            if (i <= 0 || i > static_cast<std::int64_t>(m)) continue;
            s -= 0.5 * (right_at(i) - left_at(i));
        }
        curve.values[li] = second_moment * psi.dt * s;
    }
    return curve;
}

AcfCurve empirical_acf(const sim::PathSample& path, const std::vector<double>& lags) {
    AcfCurve curve;
    curve.kind = AcfCurve::Kind::empirical;
    curve.lags = lags;
    curve.values.resize(lags.size());
    const auto n = path.values.size();
    if (n == 0) throw std::invalid_argument("empty path");
    const double mean = simd::sum(path.values.data(), n) / static_cast<double>(n);
    std::vector<double> centered(n);
    for (std::size_t i = 0; i < n; ++i) centered[i] = path.values[i] - mean;
    for (std::size_t li = 0; li < lags.size(); ++li) {
        const double cells = lags[li] / path.dt;
        if (std::fabs(cells - std::round(cells)) > 1e-9)
            throw std::invalid_argument("acf lags must be grid lags");
        const auto lag = static_cast<std::size_t>(std::llround(cells));
        if (lag >= n) throw std::invalid_argument("lag beyond path length");
        curve.values[li] =
            simd::dot(centered.data(), centered.data() + lag, n - lag) / static_cast<double>(n);
    }
    return curve;
}

LongMemoryFit long_memory_fit(const AcfCurve& acf, double t_min, double t_max) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < acf.lags.size(); ++i) {
        const double t = acf.lags[i];
        if (t < t_min || t > t_max) continue;
        const double g = acf.values[i];
        if (!(g > 0.0)) throw std::runtime_error("window not in asymptotic regime");
        const double x = std::log(t);
        const double y = std::log(g);
        pts.emplace_back(x, y);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++m;
    }
    if (m < 2) throw std::invalid_argument("need at least two lags in the fit window");
    const double denom = m * sxx - sx * sx;
    LongMemoryFit fit;
    fit.points = m;
    fit.slope = (m * sxy - sx * sy) / denom;
    const double intercept = (sy - fit.slope * sx) / m;
    fit.constant = std::exp(intercept);
    double ss = 0.0;
    for (const auto& [x, y] : pts) {
        const double r = y - (intercept + fit.slope * x);
        ss += r * r;
    }
    fit.residual = std::sqrt(ss / m);
    return fit;
}

std::string LongMemoryFit::to_text(double t_min, double t_max) const {
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "slope = %.17g\nconstant = %.17g\nresidual = %.17g\nwindow = [%.17g, %.17g]\n"
                  "points = %d\n",
                  slope, constant, residual, t_min, t_max, points);
    return buf;
}

BatchMeans batch_means(const std::vector<double>& values, int batches) {
    BatchMeans bm;
    const auto n = values.size();
    if (n == 0 || batches < 2) throw std::invalid_argument("need data and >= 2 batches");
    const std::size_t per = n / static_cast<std::size_t>(batches);
    if (per == 0) throw std::invalid_argument("too few samples for the batch count");
    bm.batches = batches;
    std::vector<double> means(static_cast<std::size_t>(batches));
    for (int b = 0; b < batches; ++b)
        means[static_cast<std::size_t>(b)] =
            simd::sum(values.data() + static_cast<std::size_t>(b) * per, per) /
            static_cast<double>(per);
    double grand = 0.0;
    for (double v : means) grand += v;
    grand /= batches;
    double var = 0.0;
    for (double v : means) var += (v - grand) * (v - grand);
    var /= (batches - 1);
    bm.mean = grand;
    bm.stderr_mean = std::sqrt(var / batches);
    return bm;
}

}  // namespace ctar::stats
