#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "ctar/signed_measure.hpp"

using namespace ctar;
using cplx = std::complex<double>;

namespace {

SignedMeasure exp_density(double alpha, double beta) {
    SignedMeasure m;
    m.gamma_terms.push_back({alpha, 1.0, beta});
    return m;
}

// Random small measure for property tests: a couple of atoms plus a gamma term.
SignedMeasure random_measure(std::uint32_t seed) {
    std::mt19937 gen(seed);
    std::uniform_real_distribution<double> u(0.1, 2.0);
    std::uniform_real_distribution<double> w(-1.0, 1.0);
    SignedMeasure m;
    m.atoms.push_back({0.0, w(gen)});
    m.atoms.push_back({u(gen), w(gen)});
    m.gamma_terms.push_back({w(gen), u(gen), 1.0 + u(gen)});
    return m;
}

}  // namespace

TEST_CASE("total variation") {
    SignedMeasure m;
    m.atoms.push_back({0.0, -1.5});
    m.gamma_terms.push_back({0.25, 1.0, 1.5});
    CHECK(total_variation(m) == doctest::Approx(1.5 + 0.25 / 1.5).epsilon(1e-15));

    CHECK(total_variation(SignedMeasure::dirac(1.0, 0.5)) == doctest::Approx(0.5));

    SignedMeasure two;
    two.atoms.push_back({0.0, 1.0});
    two.atoms.push_back({2.0, -1.0});
    CHECK(total_variation(two) == doctest::Approx(2.0));
    CHECK(total_mass(two) == doctest::Approx(0.0));
}

TEST_CASE("moments") {
    CHECK(moment(SignedMeasure::dirac(0.0, 1.0), 2) == doctest::Approx(0.0));

    SignedMeasure m;
    m.atoms.push_back({1.0, 0.5});
    m.atoms.push_back({2.0, 0.5});
    CHECK(moment(m, 1) == doctest::Approx(1.5));

    // \int u * u e^{-3u} / Gamma(2) du = Gamma(3) / (Gamma(2) 3^3) = 2/27.
    SignedMeasure g;
    g.gamma_terms.push_back({1.0, 2.0, 3.0});
    CHECK(moment(g, 1) == doctest::Approx(2.0 / 27.0).epsilon(1e-14));

    // |signed| <= absolute for every order.
    const auto r = random_measure(3);
    for (int n = 0; n <= 3; ++n)
        CHECK(std::fabs(moment(r, n, false)) <= moment(r, n, true) + 1e-14);
}

TEST_CASE("laplace transform") {
    CHECK(std::abs(laplace(SignedMeasure::dirac(0.0, 1.0), cplx(0.3, -2.0)) - 1.0) < 1e-15);

    // phi(du) = alpha e^{-beta u} du: L[phi](z) = alpha / (beta - z).
    const auto phi = exp_density(0.7, 1.3);
    const cplx z(-0.4, 1.1);
    CHECK(std::abs(laplace(phi, z) - 0.7 / (1.3 - z)) < 1e-14);

    // Atomic level measure: 1 - L[phi](z) = Phi(e^z).
    SignedMeasure atoms;
    atoms.atoms.push_back({1.0, 0.3});
    atoms.atoms.push_back({2.0, -0.2});
    const cplx expz = std::exp(z);
    CHECK(std::abs((1.0 - laplace(atoms, z)) - (1.0 - 0.3 * expz + 0.2 * expz * expz)) < 1e-14);

    CHECK_THROWS_AS(laplace(phi, cplx(1.4, 0.0)), std::domain_error);
}

TEST_CASE("characteristic function h") {
    // eta = -lambda delta_0 gives h(z) = lambda - z.
    CharacteristicFunction h{SignedMeasure::dirac(0.0, -1.0)};
    const cplx z(-0.2, 0.7);
    CHECK(std::abs(h(z) - (1.0 - z)) < 1e-14);

    // eta == 0: h(iy) = -iy vanishes at the origin.
    CharacteristicFunction h0{SignedMeasure::zero()};
    CHECK(std::abs(h0(cplx(0.0, 0.0))) == 0.0);

    // h(z) = -z - a1 - a2 (gamma - z)^{-beta}; value at 0 for (-2, 1, 1, 0.5).
    SignedMeasure eta;
    eta.atoms.push_back({0.0, -2.0});
    eta.gamma_terms.push_back({1.0, 0.5, 1.0});
    CharacteristicFunction hg{eta};
    CHECK(std::abs(hg(cplx(0.0, 0.0)) - 1.0) < 1e-14);

    // h(0) = -mass, always.
    const auto r = random_measure(11);
    CHECK(std::abs(CharacteristicFunction{r}(cplx(0.0, 0.0)) + total_mass(r)) < 1e-13);
}

TEST_CASE("cdf and cell masses") {
    const auto phi = exp_density(1.0, 1.0);
    CHECK(cdf(phi, 1.0) == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-12));

    // P(1/2, x) = erf(sqrt(x)).
    SignedMeasure g;
    g.gamma_terms.push_back({1.0, 0.5, 1.0});
    for (double u : {0.1, 0.5, 1.0, 3.0})
        CHECK(cdf(g, u) == doctest::Approx(std::erf(std::sqrt(u))).epsilon(1e-10));

    const auto masses = density_cell_masses(g, 1.0 / 64.0, 64 * 16);
    double sum = 0;
    for (double m : masses) sum += m;
    CHECK(sum == doctest::Approx(cdf(g, 16.0)).epsilon(1e-12));
}

TEST_CASE("convolution of atoms") {
    const auto d1 = SignedMeasure::dirac(1.0, 1.0);
    const auto d2 = convolve(d1, d1);
    REQUIRE(d2.atoms.size() == 1);
    CHECK(d2.atoms[0].location == doctest::Approx(2.0));
    CHECK(d2.atoms[0].weight == doctest::Approx(1.0));

    // (0.5 delta_1)^{*3} = 0.125 delta_3.
    const auto h = SignedMeasure::dirac(1.0, 0.5);
    const auto h3 = convolve(convolve(h, h), h);
    REQUIRE(h3.atoms.size() == 1);
    CHECK(h3.atoms[0].location == doctest::Approx(3.0));
    CHECK(h3.atoms[0].weight == doctest::Approx(0.125));
}

TEST_CASE("convolution of equal-rate exponentials stays parametric") {
    // (a e^{-b u}) * (a e^{-b u}) = a^2 u e^{-b u}.
    const double a = 0.6, b = 1.7;
    const auto c = convolve(exp_density(a, b), exp_density(a, b));
    REQUIRE(c.gamma_terms.size() == 1);
    CHECK(c.gamma_terms[0].coef == doctest::Approx(a * a));
    CHECK(c.gamma_terms[0].shape == doctest::Approx(2.0));
    CHECK(c.gamma_terms[0].rate == doctest::Approx(b));
    CHECK(!c.grid_density.has_value());
    // Density value at u: a^2 u e^{-bu}.
    CHECK(density_value(c, 0.9) == doctest::Approx(a * a * 0.9 * std::exp(-b * 0.9)));
}

TEST_CASE("transform multiplicativity, including grid fallbacks") {
    const GridSpec grid{1.0 / 512.0, 48.0};
    const auto mu = random_measure(21);
    const auto nu = random_measure(22);  // mixed rates force the grid path
    const auto conv = convolve(mu, nu, grid);
    for (const cplx z : {cplx(-0.3, 0.0), cplx(-0.1, 1.3), cplx(-0.8, -2.2)}) {
        const cplx lhs = laplace(conv, z);
        const cplx rhs = laplace(mu, z) * laplace(nu, z);
        CHECK(std::abs(lhs - rhs) < 2e-4 * (1.0 + std::abs(rhs)));
    }
    // Total variation is submultiplicative (equality for same signs).
    CHECK(total_variation(conv) <= total_variation(mu) * total_variation(nu) + 2e-3);
}

TEST_CASE("input validation") {
    SignedMeasure bad;
    bad.gamma_terms.push_back({1.0, -0.5, 1.0});
    CHECK_THROWS_AS(total_variation(bad), std::invalid_argument);
    CHECK_THROWS_AS(SignedMeasure::dirac(-1.0, 1.0), std::invalid_argument);
}

TEST_CASE("grid convolution support overflow is rejected") {
    SignedMeasure a, b;
    a.grid_density = GridDensity{0.25, std::vector<double>(200, 0.1)};  // support 50
    b.grid_density = GridDensity{0.25, std::vector<double>(200, 0.1)};
    CHECK_THROWS_WITH_AS(convolve(a, b, {0.25, 64.0}), doctest::Contains("horizon"),
                         std::runtime_error);
    CHECK_NOTHROW(convolve(a, b, {0.25, 128.0}));
}
