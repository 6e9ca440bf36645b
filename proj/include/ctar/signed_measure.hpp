#pragma once

#include <complex>
#include <optional>
#include <vector>

namespace ctar {

// Point mass `weight` at `location` >= 0.
struct Atom {
    double location = 0.0;
    double weight = 0.0;
};

// Density coef * u^{shape-1} e^{-rate u} / Gamma(shape) on [0, inf).
// Total mass is coef * rate^{-shape}.
struct GammaTerm {
    double coef = 0.0;
    double shape = 1.0;  // > 0
    double rate = 1.0;   // > 0
};

// Sampled density on the uniform grid u_i = i * dt, i = 0..values.size()-1.
struct GridDensity {
    double dt = 0.0;
    std::vector<double> values;
};

// Finite signed measure on [0, inf), stored as already-decomposed components.
// The components are treated as mutually singular: total variation and the
// absolute measure |mu| are taken component by component.
struct SignedMeasure {
    std::vector<Atom> atoms;
    std::vector<GammaTerm> gamma_terms;
    std::optional<GridDensity> grid_density;

    bool is_zero() const;
    double weight_at_zero() const;  // sum of atom weights at location 0
    bool has_density() const { return !gamma_terms.empty() || grid_density.has_value(); }

    // Smallest gamma rate; +inf when there is no gamma term.  The bilateral
    // Laplace transform converges for Re z below this.
    double min_gamma_rate() const;

    SignedMeasure absolute() const;  // |mu|, component-wise
    SignedMeasure scaled(double factor) const;

    static SignedMeasure dirac(double location, double weight = 1.0);
    static SignedMeasure zero();
};

// |mu|([0, inf)): sum |w| + sum |c| rate^{-shape} + dt * sum |values|.
double total_variation(const SignedMeasure& mu);

// mu([0, inf)).
double total_mass(const SignedMeasure& mu);

// \int v^n mu(dv) (or against |mu|).  Finite for every n on this
// representation; throws if the grid part contains non-finite samples.
double moment(const SignedMeasure& mu, int n, bool absolute = false);

// Bilateral Laplace transform L[mu](z) = \int e^{zu} mu(du).  Gamma terms
// contribute coef * (rate - z)^{-shape} on the principal branch, which is
// analytic for Re z < rate (the branch cut [rate, inf) is never touched).
// Throws "outside Laplace domain" when Re z >= min_gamma_rate().
std::complex<double> laplace(const SignedMeasure& mu, std::complex<double> z);

// d/dz L[mu](z) = \int u e^{zu} mu(du), same domain.
std::complex<double> laplace_derivative(const SignedMeasure& mu, std::complex<double> z);

// Cumulative distribution function F(u) = mu([0, u]).
double cdf(const SignedMeasure& mu, double u);

// Density of the non-atomic part at u > 0 (gamma pdfs + grid interpolation).
double density_value(const SignedMeasure& mu, double u);

// Exact masses of the non-atomic part over the cells [i dt, (i+1) dt),
// i = 0..n-1.  Gamma terms use the regularized incomplete gamma function;
// the grid part uses the trapezoid rule.
std::vector<double> density_cell_masses(const SignedMeasure& mu, double dt, std::size_t n);

// Horizon H with |mu|((H, inf)) <= tol (density tails; atoms are exact).
double delay_horizon(const SignedMeasure& mu, double tol);

// Grid used when a convolution has no exact representation.
struct GridSpec {
    double dt = 1.0 / 1024.0;
    double horizon = 64.0;
};

// Convolution mu * nu.  Atom pairs stay atoms; gamma terms with equal rates
// combine exactly (shapes add); every other density pair is realized on the
// fallback grid.  Throws when the grid parts' supports exceed the horizon.
SignedMeasure convolve(const SignedMeasure& mu, const SignedMeasure& nu,
                       const GridSpec& grid = {});

// h(z) = -z - L[eta](z); the zeros of h obstruct stationarity/causality.
struct CharacteristicFunction {
    SignedMeasure eta;
    std::complex<double> operator()(std::complex<double> z) const;
    std::complex<double> derivative(std::complex<double> z) const;
    double mass() const { return total_mass(eta); }
};

namespace special {
// Regularized lower incomplete gamma function P(a, x), a > 0, x >= 0.
double gamma_p(double a, double x);
}  // namespace special

}  // namespace ctar
