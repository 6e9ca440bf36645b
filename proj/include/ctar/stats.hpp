#pragma once

#include <string>
#include <vector>

#include "ctar/sampled_kernel.hpp"
#include "ctar/simulation.hpp"

namespace ctar::stats {

struct AcfCurve {
    enum class Kind { theoretical, empirical };
    std::vector<double> lags;
    std::vector<double> values;
    Kind kind = Kind::theoretical;
    double second_moment = 1.0;  // E[L_1^2] behind a theoretical curve
};

// gamma(t) = second_moment * \int psi(u) psi(u + t) du at the requested grid
// lags (multiples of psi.dt), by jump-aware trapezoid correlation.
AcfCurve theoretical_acf(const SampledKernel& psi, double second_moment,
                         const std::vector<double>& lags);

// Biased (1/n) sample autocovariance of a stationary window at grid lags.
AcfCurve empirical_acf(const sim::PathSample& path, const std::vector<double>& lags);

struct LongMemoryFit {
    double slope = 0.0;     // target 2d - 1
    double constant = 0.0;  // exp(intercept), target the hyperbolic prefactor
    double residual = 0.0;  // rms of the log-log fit residuals
    int points = 0;
    std::string to_text(double t_min, double t_max) const;
};

// Least squares of log gamma on log t over lags in [t_min, t_max]; throws
// "window not in asymptotic regime" on non-positive values in the window.
LongMemoryFit long_memory_fit(const AcfCurve& acf, double t_min, double t_max);

// Mean and batch-means standard error of the mean of `values` (estimates the
// Monte Carlo error under serial dependence).
struct BatchMeans {
    double mean = 0.0;
    double stderr_mean = 0.0;
    int batches = 0;
};
BatchMeans batch_means(const std::vector<double>& values, int batches = 32);

}  // namespace ctar::stats
