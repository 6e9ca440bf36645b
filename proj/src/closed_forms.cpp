#include "ctar/closed_forms.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace ctar::closed_forms {

SampledKernel ou_kernel(double lambda, double dt, double t_min, double t_max) {
    if (lambda == 0.0)
        throw std::invalid_argument("ou kernel undefined for lambda = 0 (zero-mass delay)");
    SampledKernel k;
    k.dt = dt;
    k.t0 = t_min;
    const auto n = static_cast<std::size_t>(std::llround((t_max - t_min) / dt));
    k.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = k.time_at(static_cast<std::int64_t>(i));
        if (lambda > 0.0)
            k.values[i] = t >= 0.0 ? std::exp(-lambda * t) : 0.0;
        else
            k.values[i] = t < 0.0 ? -std::exp(-lambda * t) : 0.0;
    }
    if (t_min <= 0.0 && t_max > 0.0) k.add_jump(k.index_of(0.0), 1.0);
    return k;
}

void CarmaSpec::validate() const {
    if (!(a1 > 0.0 && a2 > 0.0))
        throw std::invalid_argument("carma spec requires a1 > 0 and a2 > 0 (stable AR roots)");
    if (!(b0 > 0.0)) throw std::invalid_argument("carma spec requires b0 > 0 (invertibility)");
}

SignedMeasure carma_delay_measure(const CarmaSpec& spec) {
    spec.validate();
    SignedMeasure eta;
    eta.atoms.push_back({0.0, spec.b0 - spec.a1});
    const double dens = -(spec.a2 - spec.b0 * (spec.a1 - spec.b0));
    if (dens != 0.0) {
        // coefficient of e^{-b0 v}: gamma term with shape 1, rate b0, coef = dens * ... ;
        // density coef * e^{-rate v} means coef = dens here (Gamma(1) = 1).
        eta.gamma_terms.push_back({dens, 1.0, spec.b0});
    }
    return eta;
}

SampledKernel carma21_kernel(const CarmaSpec& spec, double dt, double horizon) {
    spec.validate();
    const double disc = spec.a1 * spec.a1 - 4.0 * spec.a2;
    if (disc <= 0.0) throw std::invalid_argument("fixture requires distinct real roots");
    const double r1 = 0.5 * (-spec.a1 + std::sqrt(disc));
    const double r2 = 0.5 * (-spec.a1 - std::sqrt(disc));
    // Residues of Q/P at the roots.
    const double c1 = (spec.b0 + r1) / (2.0 * r1 + spec.a1);
    const double c2 = (spec.b0 + r2) / (2.0 * r2 + spec.a1);

    SampledKernel k;
    k.dt = dt;
    k.t0 = 0.0;
    const auto n = static_cast<std::size_t>(std::llround(horizon / dt));
    k.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = dt * static_cast<double>(i);
        k.values[i] = c1 * std::exp(r1 * t) + c2 * std::exp(r2 * t);
    }
    k.add_jump(0, c1 + c2);  // = 1 for p - q = 1
    return k;
}

GammaDelayVerdict gamma_delay_existence(double alpha1, double alpha2, double beta, double gamma) {
    if (!(beta > 0.0 && gamma > 0.0))
        throw std::invalid_argument("gamma delay requires beta > 0 and gamma > 0");
    GammaDelayVerdict v;
    v.margin = alpha1 + std::fabs(alpha2) * std::pow(gamma, -beta);
    v.condition_i = alpha1 < 0.0 && v.margin < 0.0;
    v.condition_ii = alpha1 < 0.0 && alpha2 < 0.0 && beta < 1.0;
    return v;
}

std::string GammaDelayVerdict::text() const {
    if (condition_i && condition_ii) return "conditions (i) and (ii) hold";
    if (condition_i) return "condition (i) holds";
    if (condition_ii) return "condition (ii) holds";
    return "inconclusive";
}

SignedMeasure gamma_delay_measure(double alpha1, double alpha2, double beta, double gamma) {
    SignedMeasure eta;
    eta.atoms.push_back({0.0, alpha1});
    eta.gamma_terms.push_back({alpha2, beta, gamma});
    return eta;
}

void ArmaSpec::validate_causal() const {
    // Phi on the unit circle, and its winding number about the origin.
    const int m = 4096;
    double min_mod = std::numeric_limits<double>::infinity();
    double winding = 0.0;
    double prev_arg = 0.0;
    for (int j = 0; j <= m; ++j) {
        const double ang = 2.0 * std::numbers::pi * static_cast<double>(j) / m;
        std::complex<double> z = std::polar(1.0, ang);
        std::complex<double> v(1.0, 0.0);
        std::complex<double> zp = z;
        for (double p : phi) {
            v -= p * zp;
            zp *= z;
        }
        min_mod = std::min(min_mod, std::abs(v));
        const double arg = std::arg(v);
        if (j > 0) {
            double d = arg - prev_arg;
            if (d > std::numbers::pi) d -= 2.0 * std::numbers::pi;
            if (d < -std::numbers::pi) d += 2.0 * std::numbers::pi;
            winding += d;
        }
        prev_arg = arg;
    }
    if (min_mod < 1e-9) throw std::invalid_argument("AR polynomial has a root on the unit circle");
    const int zeros_inside = static_cast<int>(std::lround(winding / (2.0 * std::numbers::pi)));
    if (zeros_inside != 0)
        throw std::invalid_argument("AR polynomial has roots inside the unit disc (noncausal)");
}

std::vector<double> arma_psi_weights(const ArmaSpec& spec, int n) {
    spec.validate_causal();
    std::vector<double> psi(static_cast<std::size_t>(n) + 1, 0.0);
    const auto p = spec.phi.size();
    const auto q = spec.theta.size();
    for (std::size_t j = 0; j < psi.size(); ++j) {
        double v = 0.0;
        if (j == 0)
            v = 1.0;
        else if (j <= q)
            v = spec.theta[j - 1];
        for (std::size_t k = 1; k <= std::min<std::size_t>(j, p); ++k)
            v += spec.phi[k - 1] * psi[j - k];
        psi[j] = v;
    }
    return psi;
}

SampledKernel staircase_kernel(const std::vector<double>& heights, double dt, double width) {
    SampledKernel k;
    k.dt = dt;
    k.t0 = 0.0;
    const auto cells = static_cast<std::size_t>(std::llround(width / dt));
    k.values.assign(cells * heights.size(), 0.0);
    for (std::size_t j = 0; j < heights.size(); ++j)
        for (std::size_t i = 0; i < cells; ++i) k.values[j * cells + i] = heights[j];
    double prev = 0.0;
    for (std::size_t j = 0; j < heights.size(); ++j) {
        k.add_jump(static_cast<std::int64_t>(j * cells), heights[j] - prev);
        prev = heights[j];
    }
    k.add_jump(static_cast<std::int64_t>(k.values.size()), -prev);
    return k;
}

ArmaLevelInputs arma_level_inputs(const ArmaSpec& spec, double dt) {
    spec.validate_causal();
    ArmaLevelInputs out;
    for (std::size_t j = 0; j < spec.phi.size(); ++j)
        out.phi.atoms.push_back({static_cast<double>(j + 1), spec.phi[j]});
    std::vector<double> heights{1.0};
    for (double t : spec.theta) heights.push_back(t);
    out.theta = staircase_kernel(heights, dt);
    return out;
}

SampledKernel fractional_theta(double d, double dt, double horizon) {
    if (!(d > 0.0 && d < 0.5))
        throw std::invalid_argument("fractional exponent must lie in (0, 1/2)");
    SampledKernel k;
    k.dt = dt;
    k.t0 = 0.0;
    const auto n = static_cast<std::size_t>(std::llround(horizon / dt));
    k.values.resize(n);
    const double norm = 1.0 / std::tgamma(1.0 + d);
    for (std::size_t i = 0; i < n; ++i)
        k.values[i] = std::pow(dt * static_cast<double>(i), d) * norm;
    return k;
}

double long_memory_constant(double d, double second_moment, double h0) {
    if (!(d > 0.0 && d < 0.5))
        throw std::invalid_argument("fractional exponent must lie in (0, 1/2)");
    if (h0 == 0.0) throw std::invalid_argument("h(0) must be nonzero");
    if (second_moment == 0.0) return 0.0;
    const double g = std::exp(std::lgamma(1.0 - 2.0 * d) - std::lgamma(d) - std::lgamma(1.0 - d));
    return g * second_moment / (h0 * h0);
}

}  // namespace ctar::closed_forms
