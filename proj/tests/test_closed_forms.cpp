#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ctar/closed_forms.hpp"

using namespace ctar;
using namespace ctar::closed_forms;

TEST_CASE("ou kernel branches") {
    const double dt = 1.0 / 128.0;
    const auto causal = ou_kernel(1.0, dt, 0.0, 8.0);
    CHECK(causal.value_at(0.0) == doctest::Approx(1.0));
    CHECK(causal.value_at(1.0) == doctest::Approx(std::exp(-1.0)));
    CHECK(causal.value_at(-0.5) == 0.0);

    const auto anti = ou_kernel(-1.0, dt, -8.0, 8.0);
    CHECK(anti.value_at(-1.0) == doctest::Approx(-std::exp(-1.0)).epsilon(1e-12));
    CHECK(anti.value_at(0.5) == 0.0);
    CHECK(anti.value_at(0.0) == 0.0);  // right-continuous representative

    CHECK_THROWS_AS(ou_kernel(0.0, dt, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("carma delay measure") {
    const auto eta = carma_delay_measure({3.0, 2.0, 1.5});
    REQUIRE(eta.atoms.size() == 1);
    CHECK(eta.atoms[0].weight == doctest::Approx(-1.5));
    REQUIRE(eta.gamma_terms.size() == 1);
    CHECK(eta.gamma_terms[0].coef == doctest::Approx(0.25));
    CHECK(eta.gamma_terms[0].rate == doctest::Approx(1.5));

    // Density coefficient cancels for b0 = 1: pure OU-like atom.
    const auto degenerate = carma_delay_measure({3.0, 2.0, 1.0});
    CHECK(degenerate.atoms[0].weight == doctest::Approx(-2.0));
    CHECK(degenerate.gamma_terms.empty());

    CHECK_THROWS_AS(carma_delay_measure({3.0, 2.0, -1.0}), std::invalid_argument);
    CHECK_THROWS_AS(carma_delay_measure({-3.0, 2.0, 1.0}), std::invalid_argument);
}

TEST_CASE("carma(2,1) residue kernel") {
    const double dt = 1.0 / 128.0;
    const auto g = carma21_kernel({3.0, 2.0, 1.5}, dt, 16.0);
    // Roots -1, -2 with residues 0.5, 0.5.
    for (double t : {0.0, 0.5, 1.0, 3.0})
        CHECK(g.value_at(t) ==
              doctest::Approx(0.5 * std::exp(-t) + 0.5 * std::exp(-2.0 * t)).epsilon(1e-12));
    CHECK(g.value_at(-dt) == 0.0);
    CHECK(g.value_at(0.0) == doctest::Approx(1.0));  // residues sum to 1 for p - q = 1

    CHECK_THROWS_AS(carma21_kernel({2.0, 1.0, 0.5}, dt, 4.0), std::invalid_argument);  // double root
}

TEST_CASE("gamma delay existence conditions") {
    const auto i = gamma_delay_existence(-2.0, 1.0, 0.5, 1.0);
    CHECK(i.condition_i);
    CHECK(i.margin == doctest::Approx(-1.0));

    const auto ii = gamma_delay_existence(-1.0, -1.0, 0.5, 0.1);
    CHECK(ii.condition_ii);

    const auto none = gamma_delay_existence(1.0, -0.5, 0.5, 1.0);
    CHECK(!none.conclusive());
    CHECK(none.text() == "inconclusive");
}

TEST_CASE("arma psi weights") {
    CHECK(arma_psi_weights({{0.5}, {}}, 8) ==
          std::vector<double>{1, 0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625, 0.0078125,
                              0.00390625});
    CHECK(arma_psi_weights({{}, {0.4}}, 4) == std::vector<double>{1, 0.4, 0, 0, 0});
    const auto w = arma_psi_weights({{0.5}, {0.4}}, 4);
    CHECK(w[0] == doctest::Approx(1.0));
    CHECK(w[1] == doctest::Approx(0.9));
    CHECK(w[2] == doctest::Approx(0.45));
    CHECK(w[3] == doctest::Approx(0.225));

    // Defining recursion holds to machine precision.
    const ArmaSpec spec{{0.3, -0.2}, {0.5}};
    const auto psi = arma_psi_weights(spec, 32);
    for (std::size_t j = 0; j <= 32; ++j) {
        double rhs = j == 0 ? 1.0 : (j == 1 ? 0.5 : 0.0);
        for (std::size_t k = 1; k <= std::min<std::size_t>(j, 2); ++k)
            rhs += spec.phi[k - 1] * psi[j - k];
        CHECK(psi[j] == doctest::Approx(rhs).epsilon(1e-15));
    }

    CHECK_THROWS_AS(arma_psi_weights({{1.0}, {}}, 4), std::invalid_argument);   // unit root
    CHECK_THROWS_AS(arma_psi_weights({{2.0}, {}}, 4), std::invalid_argument);   // root inside
}

TEST_CASE("arma level inputs") {
    const auto in = arma_level_inputs({{0.5}, {0.4}}, 1.0 / 32.0);
    REQUIRE(in.phi.atoms.size() == 1);
    CHECK(in.phi.atoms[0].location == doctest::Approx(1.0));
    CHECK(in.phi.atoms[0].weight == doctest::Approx(0.5));
    CHECK(in.theta.value_at(0.5) == doctest::Approx(1.0));
    CHECK(in.theta.value_at(1.5) == doctest::Approx(0.4));
    CHECK(in.theta.value_at(2.5) == 0.0);
}

TEST_CASE("fractional kernel") {
    const auto th = fractional_theta(0.25, 1.0 / 64.0, 16.0);
    CHECK(th.value_at(1.0) == doctest::Approx(1.0 / std::tgamma(1.25)).epsilon(1e-12));
    CHECK(th.value_at(-1.0) == 0.0);
    CHECK(th.value_at(0.0) == 0.0);
    CHECK_THROWS_AS(fractional_theta(0.6, 0.1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(fractional_theta(0.0, 0.1, 1.0), std::invalid_argument);
}

TEST_CASE("long memory constant") {
    // Gamma(1/2) / (Gamma(1/4) Gamma(3/4)) = 1/sqrt(2 pi) by reflection.
    CHECK(long_memory_constant(0.25, 1.0, 1.0) ==
          doctest::Approx(1.0 / std::sqrt(2.0 * std::numbers::pi)).epsilon(1e-14));
    CHECK(long_memory_constant(0.25, 0.0, 1.0) == 0.0);
    CHECK(long_memory_constant(0.01, 1.0, 1.0) < 0.05);  // vanishes as d -> 0
    CHECK_THROWS_AS(long_memory_constant(0.25, 1.0, 0.0), std::invalid_argument);
}
