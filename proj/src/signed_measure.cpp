#include "ctar/signed_measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ctar {

namespace special {

namespace {

// Series expansion of P(a, x), effective for x < a + 1.
double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 500; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Continued fraction for Q(a, x) = 1 - P(a, x), effective for x >= a + 1
// (modified Lentz).
double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 500; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-16) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double gamma_p(double a, double x) {
    if (a <= 0.0) throw std::invalid_argument("gamma_p requires a > 0");
    if (x <= 0.0) return 0.0;
    if (x < a + 1.0) return gamma_p_series(a, x);
    return 1.0 - gamma_q_cf(a, x);
}

}  // namespace special

bool SignedMeasure::is_zero() const {
    for (const auto& a : atoms)
        if (a.weight != 0.0) return false;
    for (const auto& g : gamma_terms)
        if (g.coef != 0.0) return false;
    if (grid_density) {
        for (double v : grid_density->values)
            if (v != 0.0) return false;
    }
    return true;
}

double SignedMeasure::weight_at_zero() const {
    double w = 0.0;
    for (const auto& a : atoms)
        if (a.location == 0.0) w += a.weight;
    return w;
}

double SignedMeasure::min_gamma_rate() const {
    double r = std::numeric_limits<double>::infinity();
    for (const auto& g : gamma_terms) r = std::min(r, g.rate);
    return r;
}

SignedMeasure SignedMeasure::absolute() const {
    SignedMeasure out = *this;
    for (auto& a : out.atoms) a.weight = std::fabs(a.weight);
    for (auto& g : out.gamma_terms) g.coef = std::fabs(g.coef);
    if (out.grid_density)
        for (auto& v : out.grid_density->values) v = std::fabs(v);
    return out;
}

SignedMeasure SignedMeasure::scaled(double factor) const {
    SignedMeasure out = *this;
    for (auto& a : out.atoms) a.weight *= factor;
    for (auto& g : out.gamma_terms) g.coef *= factor;
    if (out.grid_density)
        for (auto& v : out.grid_density->values) v *= factor;
    return out;
}

SignedMeasure SignedMeasure::dirac(double location, double weight) {
    if (location < 0.0) throw std::invalid_argument("atom location must be >= 0");
    SignedMeasure mu;
    mu.atoms.push_back({location, weight});
    return mu;
}

SignedMeasure SignedMeasure::zero() { return {}; }

namespace {

void validate(const SignedMeasure& mu) {
    for (const auto& a : mu.atoms)
        if (a.location < 0.0) throw std::invalid_argument("atom location must be >= 0");
    for (const auto& g : mu.gamma_terms)
        if (g.shape <= 0.0 || g.rate <= 0.0)
            throw std::invalid_argument("gamma term requires shape > 0 and rate > 0");
    if (mu.grid_density && mu.grid_density->dt <= 0.0 && !mu.grid_density->values.empty())
        throw std::invalid_argument("grid density requires dt > 0");
}

// Grid densities integrate by the trapezoid rule on their own grid (linear
// between samples, zero past the last): weight 1/2 at u = 0, 1 elsewhere.
double grid_weight(std::size_t k) { return k == 0 ? 0.5 : 1.0; }

double grid_mass(const GridDensity& g, bool absolute) {
    double s = 0.0;
    for (std::size_t k = 0; k < g.values.size(); ++k)
        s += grid_weight(k) * (absolute ? std::fabs(g.values[k]) : g.values[k]);
    return s * g.dt;
}

double grid_density_at(const GridDensity& g, double u) {
    if (u < 0.0 || g.values.empty()) return 0.0;
    const double x = u / g.dt;
    if (x >= static_cast<double>(g.values.size())) return 0.0;
    const auto i = static_cast<std::size_t>(x);
    const double frac = x - static_cast<double>(i);
    const double right = (i + 1 < g.values.size()) ? g.values[i + 1] : 0.0;
    return g.values[i] + frac * (right - g.values[i]);
}

}  // namespace

double total_variation(const SignedMeasure& mu) {
    validate(mu);
    double tv = 0.0;
    for (const auto& a : mu.atoms) tv += std::fabs(a.weight);
    for (const auto& g : mu.gamma_terms) tv += std::fabs(g.coef) * std::pow(g.rate, -g.shape);
    if (mu.grid_density) tv += grid_mass(*mu.grid_density, true);
    return tv;
}

double total_mass(const SignedMeasure& mu) {
    validate(mu);
    double m = 0.0;
    for (const auto& a : mu.atoms) m += a.weight;
    for (const auto& g : mu.gamma_terms) m += g.coef * std::pow(g.rate, -g.shape);
    if (mu.grid_density) m += grid_mass(*mu.grid_density, false);
    return m;
}

double moment(const SignedMeasure& mu, int n, bool absolute) {
    validate(mu);
    if (n < 0) throw std::invalid_argument("moment order must be >= 0");
    double m = 0.0;
    for (const auto& a : mu.atoms) {
        const double w = absolute ? std::fabs(a.weight) : a.weight;
        m += w * std::pow(a.location, n);
    }
    for (const auto& g : mu.gamma_terms) {
        const double c = absolute ? std::fabs(g.coef) : g.coef;
        // \int u^n u^{shape-1} e^{-rate u} du / Gamma(shape)
        //   = Gamma(shape+n) / (Gamma(shape) rate^{shape+n}).
        m += c * std::exp(std::lgamma(g.shape + n) - std::lgamma(g.shape) -
                          (g.shape + n) * std::log(g.rate));
    }
    if (mu.grid_density) {
        const auto& g = *mu.grid_density;
        double s = 0.0;
        for (std::size_t i = 0; i < g.values.size(); ++i) {
            const double v = absolute ? std::fabs(g.values[i]) : g.values[i];
            if (!std::isfinite(v))
                throw std::runtime_error("moment not finite on grid representation");
            s += grid_weight(i) * v * std::pow(g.dt * static_cast<double>(i), n);
        }
        m += s * g.dt;
    }
    return m;
}

std::complex<double> laplace(const SignedMeasure& mu, std::complex<double> z) {
    validate(mu);
    const double rate_bound = mu.min_gamma_rate();
    if (z.real() >= rate_bound)
        throw std::domain_error("outside Laplace domain: Re z must be < " +
                                std::to_string(rate_bound));
    std::complex<double> s = 0.0;
    for (const auto& a : mu.atoms) s += a.weight * std::exp(z * a.location);
    for (const auto& g : mu.gamma_terms) {
        // coef * (rate - z)^{-shape}, principal branch; rate - z has positive
        // real part here, so the cut on the negative real axis is avoided.
        s += g.coef * std::exp(-g.shape * std::log(std::complex<double>(g.rate, 0.0) - z));
    }
    if (mu.grid_density) {
        const auto& g = *mu.grid_density;
        std::complex<double> acc = 0.0;
        for (std::size_t i = 0; i < g.values.size(); ++i)
            acc += grid_weight(i) * g.values[i] * std::exp(z * (g.dt * static_cast<double>(i)));
        s += acc * g.dt;
    }
    return s;
}

double cdf(const SignedMeasure& mu, double u) {
    validate(mu);
    if (u < 0.0) return 0.0;
    double s = 0.0;
    for (const auto& a : mu.atoms)
        if (a.location <= u) s += a.weight;
    for (const auto& g : mu.gamma_terms)
        s += g.coef * std::pow(g.rate, -g.shape) * special::gamma_p(g.shape, g.rate * u);
    if (mu.grid_density) {
        const auto& g = *mu.grid_density;
        // Trapezoid over the piecewise-linear density, including the closing
        // cell where it decays to zero past the last sample.
        double acc = 0.0;
        for (std::size_t i = 0; i < g.values.size(); ++i) {
            const double left = g.dt * static_cast<double>(i);
            if (left >= u) break;
            const double vl = g.values[i];
            const double vr = i + 1 < g.values.size() ? g.values[i + 1] : 0.0;
            const double frac = std::min(1.0, (u - left) / g.dt);
            acc += 0.5 * frac * (2.0 * vl + frac * (vr - vl));
        }
        s += acc * g.dt;
    }
    return s;
}

double density_value(const SignedMeasure& mu, double u) {
    if (u < 0.0) return 0.0;
    double s = 0.0;
    for (const auto& g : mu.gamma_terms) {
        if (u == 0.0 && g.shape < 1.0) continue;  // integrable singularity
        if (u == 0.0 && g.shape == 1.0) {
            s += g.coef * g.rate / std::tgamma(1.0);
            continue;
        }
        s += g.coef * std::exp((g.shape - 1.0) * std::log(u) - g.rate * u - std::lgamma(g.shape));
    }
    if (mu.grid_density) s += grid_density_at(*mu.grid_density, u);
    return s;
}

std::vector<double> density_cell_masses(const SignedMeasure& mu, double dt, std::size_t n) {
    std::vector<double> masses(n, 0.0);
    for (const auto& g : mu.gamma_terms) {
        const double mass = g.coef * std::pow(g.rate, -g.shape);
        double p_lo = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double p_hi = special::gamma_p(g.shape, g.rate * dt * static_cast<double>(i + 1));
            masses[i] += mass * (p_hi - p_lo);
            p_lo = p_hi;
        }
    }
    if (mu.grid_density) {
        const auto& g = *mu.grid_density;
        for (std::size_t i = 0; i < n; ++i) {
            const double lo = dt * static_cast<double>(i);
            const double hi = dt * static_cast<double>(i + 1);
            // Trapezoid on the sampled density over [lo, hi].
            masses[i] += 0.5 * (grid_density_at(g, lo) + grid_density_at(g, hi)) * (hi - lo);
        }
    }
    return masses;
}

namespace {

// Numeric density of term_a * term_b realized on the grid: exact cell masses
// of one factor dotted against midpoint samples of the other.
void accumulate_numeric_pair(const SignedMeasure& mass_side, const SignedMeasure& sample_side,
                             const GridSpec& grid, std::vector<double>& out) {
    const auto n = out.size();
    const auto masses = density_cell_masses(mass_side, grid.dt, n);
    std::vector<double> half(n, 0.0);
    for (std::size_t j = 0; j < n; ++j)
        half[j] = density_value(sample_side, (static_cast<double>(j) + 0.5) * grid.dt);
    // (f*g)(u_k) = sum_i m_i g(u_k - v_i), v_i the cell midpoints.
    for (std::size_t k = 0; k < n; ++k) {
        double s = 0.0;
        for (std::size_t i = 0; i < k; ++i) s += masses[i] * half[k - i - 1];
        out[k] += s;
    }
}

SignedMeasure only_term(const GammaTerm& g) {
    SignedMeasure m;
    m.gamma_terms.push_back(g);
    return m;
}

SignedMeasure only_grid(const GridDensity& g) {
    SignedMeasure m;
    m.grid_density = g;
    return m;
}

}  // namespace

SignedMeasure convolve(const SignedMeasure& mu, const SignedMeasure& nu, const GridSpec& grid) {
    validate(mu);
    validate(nu);
    SignedMeasure out;

    // Atom x atom: locations add, weights multiply.
    for (const auto& a : mu.atoms)
        for (const auto& b : nu.atoms) out.atoms.push_back({a.location + b.location, a.weight * b.weight});

    // Support audit for the gridded remainder.
    if (mu.grid_density && nu.grid_density) {
        const double sa = mu.grid_density->dt * static_cast<double>(mu.grid_density->values.size());
        const double sb = nu.grid_density->dt * static_cast<double>(nu.grid_density->values.size());
        if (sa + sb > grid.horizon)
            throw std::runtime_error("convolution support exceeds configured horizon");
    }

    const auto n = static_cast<std::size_t>(std::llround(grid.horizon / grid.dt));
    std::vector<double> numeric(n, 0.0);
    bool has_numeric = false;

    // Atom x density: exact shift of the density.
    auto atom_times_density = [&](const std::vector<Atom>& atoms, const SignedMeasure& dens) {
        if (!dens.has_density()) return;
        for (const auto& a : atoms) {
            if (a.weight == 0.0) continue;
            if (a.location == 0.0) {
                // No shift: keep the parametric form.
                for (const auto& g : dens.gamma_terms)
                    out.gamma_terms.push_back({a.weight * g.coef, g.shape, g.rate});
                if (dens.grid_density) {
                    has_numeric = true;
                    for (std::size_t k = 0; k < n; ++k)
                        numeric[k] += a.weight * grid_density_at(*dens.grid_density,
                                                                 grid.dt * static_cast<double>(k));
                }
            } else {
                has_numeric = true;
                for (std::size_t k = 0; k < n; ++k) {
                    const double u = grid.dt * static_cast<double>(k) - a.location;
                    numeric[k] += a.weight * density_value(dens, u);
                }
            }
        }
    };
    atom_times_density(mu.atoms, nu);
    atom_times_density(nu.atoms, mu);

    // Gamma x gamma: equal rates stay parametric, mixed rates go to the grid.
    for (const auto& ga : mu.gamma_terms) {
        for (const auto& gb : nu.gamma_terms) {
            if (ga.rate == gb.rate) {
                // Transforms multiply: c1 c2 (rate - z)^{-(s1+s2)}.
                out.gamma_terms.push_back({ga.coef * gb.coef, ga.shape + gb.shape, ga.rate});
            } else {
                has_numeric = true;
                accumulate_numeric_pair(only_term(ga), only_term(gb), grid, numeric);
            }
        }
    }

    // Gamma x grid and grid x grid.
    if (nu.grid_density)
        for (const auto& ga : mu.gamma_terms) {
            has_numeric = true;
            accumulate_numeric_pair(only_term(ga), only_grid(*nu.grid_density), grid, numeric);
        }
    if (mu.grid_density)
        for (const auto& gb : nu.gamma_terms) {
            has_numeric = true;
            accumulate_numeric_pair(only_term(gb), only_grid(*mu.grid_density), grid, numeric);
        }
    if (mu.grid_density && nu.grid_density) {
        has_numeric = true;
        accumulate_numeric_pair(only_grid(*mu.grid_density), only_grid(*nu.grid_density), grid,
                                numeric);
    }

    if (has_numeric) out.grid_density = GridDensity{grid.dt, std::move(numeric)};
    return out;
}

std::complex<double> laplace_derivative(const SignedMeasure& mu, std::complex<double> z) {
    validate(mu);
    if (z.real() >= mu.min_gamma_rate())
        throw std::domain_error("outside Laplace domain");
    std::complex<double> s = 0.0;
    for (const auto& a : mu.atoms) s += a.weight * a.location * std::exp(z * a.location);
    for (const auto& g : mu.gamma_terms) {
        // d/dz coef (rate - z)^{-shape} = coef shape (rate - z)^{-shape-1}.
        s += g.coef * g.shape *
             std::exp(-(g.shape + 1.0) * std::log(std::complex<double>(g.rate, 0.0) - z));
    }
    if (mu.grid_density) {
        const auto& g = *mu.grid_density;
        std::complex<double> acc = 0.0;
        for (std::size_t i = 0; i < g.values.size(); ++i) {
            const double u = g.dt * static_cast<double>(i);
            acc += grid_weight(i) * g.values[i] * u * std::exp(z * u);
        }
        s += acc * g.dt;
    }
    return s;
}

std::complex<double> CharacteristicFunction::operator()(std::complex<double> z) const {
    return -z - laplace(eta, z);
}

std::complex<double> CharacteristicFunction::derivative(std::complex<double> z) const {
    return -1.0 - laplace_derivative(eta, z);
}

double delay_horizon(const SignedMeasure& mu, double tol) {
    double h = 0.0;
    for (const auto& a : mu.atoms) h = std::max(h, a.location);
    for (const auto& g : mu.gamma_terms) {
        if (g.coef == 0.0) continue;
        const double mass = std::fabs(g.coef) * std::pow(g.rate, -g.shape);
        double t = std::max(1.0, g.shape / g.rate);
        while (mass * (1.0 - special::gamma_p(g.shape, g.rate * t)) > tol && t < 1e6) t *= 1.5;
        h = std::max(h, t);
    }
    if (mu.grid_density)
        h = std::max(h, mu.grid_density->dt * static_cast<double>(mu.grid_density->values.size()));
    return h;
}

}  // namespace ctar
