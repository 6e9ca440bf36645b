#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ctar/closed_forms.hpp"
#include "ctar/rng.hpp"
#include "ctar/simulation.hpp"

using namespace ctar;
namespace cf = closed_forms;

TEST_CASE("philox known-answer vectors") {
    // Reference vectors for philox4x32-10.
    auto out = rng::philox4x32({0, 0, 0, 0}, {0, 0});
    CHECK(out[0] == 0x6627e8d5u);
    CHECK(out[1] == 0xe169c58du);
    CHECK(out[2] == 0xbc57ac4cu);
    CHECK(out[3] == 0x9b00dbd8u);

    out = rng::philox4x32({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                          {0xffffffffu, 0xffffffffu});
    CHECK(out[0] == 0x408f276du);
    CHECK(out[1] == 0x41c83b0eu);
    CHECK(out[2] == 0xa20bc7c6u);
    CHECK(out[3] == 0x6d5451fdu);

    out = rng::philox4x32({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                          {0xa4093822u, 0x299f31d0u});
    CHECK(out[0] == 0xd16cfe09u);
    CHECK(out[1] == 0x94fdccebu);
    CHECK(out[2] == 0x5001e420u);
    CHECK(out[3] == 0x24126ea1u);
}

TEST_CASE("counter stream draws are in range and reproducible") {
    const rng::CounterStream s(123, 7);
    for (std::uint64_t step : {0ull, 5ull, 1000000ull}) {
        const double u = s.uniform(step, 0);
        CHECK(u > 0.0);
        CHECK(u < 1.0);
        CHECK(s.uniform(step, 0) == u);
        CHECK(s.normal(step, 0) == s.normal(step, 0));
    }
    const rng::CounterStream other(123, 8);
    CHECK(other.uniform(0, 0) != s.uniform(0, 0));
}

TEST_CASE("simulate_increments determinism and degenerate driver") {
    sim::LevyDriver quiet;
    quiet.gaussian_var = 0.0;
    const auto z = sim::simulate_increments(quiet, 0.01, 100, 0.0, 9, 0);
    for (double v : z.values) CHECK(v == 0.0);

    sim::LevyDriver d;
    const auto a = sim::simulate_increments(d, 0.01, 1000, 0.0, 42, 3);
    const auto b = sim::simulate_increments(d, 0.01, 1000, 0.0, 42, 3);
    CHECK(a.values == b.values);
    const auto c = sim::simulate_increments(d, 0.01, 1000, 0.0, 43, 3);
    CHECK(a.values != c.values);
}

TEST_CASE("increment moments satisfy CLT bounds") {
    sim::LevyDriver d;  // sigma^2 = 1
    const double dt = 0.01;
    const std::size_t n = 1000000;
    const auto z = sim::simulate_increments(d, dt, n, 0.0, 2024, 0);
    double mean = 0, var = 0;
    for (double v : z.values) mean += v;
    mean /= static_cast<double>(n);
    for (double v : z.values) var += (v - mean) * (v - mean);
    var /= static_cast<double>(n);
    CHECK(std::fabs(mean) <= 4.0 * std::sqrt(dt / static_cast<double>(n)));
    CHECK(std::fabs(var - dt) <= 0.02 * dt);
}

TEST_CASE("compound poisson variance") {
    sim::LevyDriver d;
    d.gaussian_var = 0.5;
    d.jumps.law = sim::JumpPart::Law::two_point;
    d.jumps.rate = 2.0;
    d.jumps.param = 0.7;
    CHECK(d.second_moment() == doctest::Approx(0.5 + 2.0 * 0.49));
    const double dt = 0.02;
    const std::size_t n = 400000;
    const auto z = sim::simulate_increments(d, dt, n, 0.0, 515, 1);
    double var = 0;
    for (double v : z.values) var += v * v;
    var /= static_cast<double>(n);
    CHECK(var == doctest::Approx(d.second_moment() * dt).epsilon(0.03));
}

TEST_CASE("normal jump law variance and moving-average isometry with jumps") {
    sim::LevyDriver d;
    d.gaussian_var = 0.25;
    d.jumps.law = sim::JumpPart::Law::centered_normal;
    d.jumps.rate = 3.0;
    d.jumps.param = 0.4;
    CHECK(d.second_moment() == doctest::Approx(0.25 + 1.2));
    const double dt = 1.0 / 64.0;
    const auto inc = sim::simulate_increments(d, dt, 300000, 0.0, 808, 0);
    double var = 0;
    for (double v : inc.values) var += v * v;
    var /= static_cast<double>(inc.values.size());
    CHECK(var == doctest::Approx(d.second_moment() * dt).epsilon(0.03));

    // var(X) = E[L_1^2] * sum of squared taps for any finite-variance driver.
    const auto psi = cf::ou_kernel(1.0, dt, 0.0, 16.0);
    const auto path = sim::moving_average_path(psi, inc, 1e-2);
    double tap_sq = 0.0;
    for (std::size_t i = 1; i <= psi.values.size(); ++i) {
        const double tap = psi.left_value(static_cast<std::int64_t>(i));
        tap_sq += tap * tap;
    }
    double pvar = 0;
    for (double v : path.values) pvar += v * v;
    pvar /= static_cast<double>(path.values.size());
    CHECK(pvar == doctest::Approx(d.second_moment() * dt * tap_sq).epsilon(0.05));
}

TEST_CASE("fractional horizon audit fires on short lags") {
    sim::LevyDriver d;
    CHECK_THROWS_WITH_AS(
        sim::fractional_noise_increments(0.45, d, 1.0 / 64.0, 64, 0.0, 1, 0, 2.0, 1e-6),
        doctest::Contains("horizon audit"), std::runtime_error);
}

TEST_CASE("integrability functional") {
    sim::LevyDriver d;  // Brownian, sigma^2 = 1
    const double dt = 1.0 / 512.0;
    auto zero = cf::staircase_kernel({0.0}, dt);
    CHECK(sim::integrability_check(zero, d).value == doctest::Approx(0.0));

    const auto f = cf::ou_kernel(1.0, dt, 0.0, 24.0);
    const auto rep = sim::integrability_check(f, d);
    CHECK(rep.pass);
    CHECK(rep.value == doctest::Approx(0.5).epsilon(1e-3));

    sim::LevyDriver jumps;
    jumps.gaussian_var = 0.0;
    jumps.jumps.law = sim::JumpPart::Law::two_point;
    jumps.jumps.rate = 1.0;
    jumps.jumps.param = 1.0;
    const auto ind = cf::staircase_kernel({1.0}, dt);
    CHECK(sim::integrability_check(ind, jumps).value == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("moving average with unit-step kernel reproduces L_t - L_{t-1}") {
    const double dt = 1.0 / 64.0;
    sim::LevyDriver d;
    const auto inc = sim::simulate_increments(d, dt, 4096, 0.0, 77, 0);
    const auto psi = cf::staircase_kernel({1.0}, dt);
    const auto path = sim::moving_average_path(psi, inc);
    const auto m = static_cast<std::size_t>(std::llround(1.0 / dt));
    for (std::size_t k : {0u, 100u, 1000u}) {
        const auto base = static_cast<std::size_t>(
            std::llround((path.time_at(k) - inc.t_start) / dt));
        double want = 0.0;
        for (std::size_t j = base - m; j < base; ++j) want += inc.values[j];
        CHECK(path.values[k] == doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("moving average matches a direct reference sum, both causal and noncausal") {
    const double dt = 1.0 / 16.0;
    sim::LevyDriver d;
    const auto inc = sim::simulate_increments(d, dt, 256, -4.0, 5150, 2);
    for (const auto& psi :
         {cf::ou_kernel(1.0, dt, 0.0, 4.0), cf::ou_kernel(-1.0, dt, -4.0, 4.0)}) {
        const auto path = sim::moving_average_path(psi, inc, 0.5);
        for (std::size_t k = 0; k < path.values.size(); k += 17) {
            const double t = path.time_at(k);
            double want = 0.0;
            for (std::size_t j = 0; j < inc.values.size(); ++j) {
                // Reference rule: left limit of psi at each grid lag.
                const double lag = t - inc.time_at(j);
                const auto idx = static_cast<std::int64_t>(std::llround((lag - psi.t0) / dt));
                want += psi.left_value(idx) * inc.values[j];
            }
            CHECK(path.values[k] == doctest::Approx(want).epsilon(1e-10));
        }
    }
}

TEST_CASE("kernel horizon audit rejects heavy tails") {
    const double dt = 1.0 / 64.0;
    sim::LevyDriver d;
    const auto inc = sim::simulate_increments(d, dt, 1024, 0.0, 3, 0);
    const auto bad = cf::ou_kernel(1.0, dt, 0.0, 1.0);  // tail mass is huge
    CHECK_THROWS_WITH_AS(sim::moving_average_path(bad, inc, 1e-3),
                         doctest::Contains("horizon too short"), std::runtime_error);
}

TEST_CASE("euler scheme: one step by hand and the zero fixture") {
    const double dt = 1.0 / 128.0;
    const auto eta = SignedMeasure::dirac(0.0, -1.0);  // Langevin drift -X dt

    sim::PathSample init;
    init.dt = dt;
    init.t_start = 0.0;
    init.values = {2.0};

    sim::PathSample noise;
    noise.dt = dt;
    noise.t_start = 0.0;
    noise.values = {0.25, -0.5};

    const auto path = sim::euler_sdde_path(eta, noise, init);
    REQUIRE(path.values.size() == 3);
    CHECK(path.values[0] == doctest::Approx(2.0));
    CHECK(path.values[1] == doctest::Approx(2.0 - dt * 2.0 + 0.25));
    CHECK(path.values[2] ==
          doctest::Approx(path.values[1] * (1.0 - dt) - 0.5));

    // Z == 0 with zero history stays at zero.
    sim::PathSample zero_noise = noise;
    zero_noise.values = {0.0, 0.0};
    sim::PathSample zero_init = init;
    zero_init.values = {0.0};
    const auto still = sim::euler_sdde_path(eta, zero_noise, zero_init);
    for (double v : still.values) CHECK(v == 0.0);

    // Delay horizon exceeding the history is rejected.
    const auto carma = cf::carma_delay_measure({3.0, 2.0, 1.5});
    CHECK_THROWS_WITH_AS(sim::euler_sdde_path(carma, noise, init),
                         doctest::Contains("insufficient history"), std::invalid_argument);
}

TEST_CASE("fractional increments: determinism and the d -> 0 limit") {
    sim::LevyDriver d;
    const double dt = 1.0 / 64.0;
    const auto a = sim::fractional_noise_increments(0.25, d, dt, 512, 0.0, 11, 0);
    const auto b = sim::fractional_noise_increments(0.25, d, dt, 512, 0.0, 11, 0);
    CHECK(a.values == b.values);

    // As d -> 0 the taps collapse onto lag one: dZ_k ~ dL_{k-1}.
    const double tiny = 1e-4;
    const auto z = sim::fractional_noise_increments(tiny, d, dt, 256, 0.0, 13, 0);
    const auto m = static_cast<std::size_t>(std::llround(64.0 / dt));
    const auto base = sim::simulate_increments(d, dt, 256 + m, -64.0, 13, 0);
    double num = 0, den = 0;
    for (std::size_t k = 0; k < z.values.size(); ++k) {
        const double ref = base.values[k + m - 1];
        num += (z.values[k] - ref) * (z.values[k] - ref);
        den += ref * ref;
    }
    CHECK(std::sqrt(num / den) < 0.01);
}

TEST_CASE("increment representation of the moving-average path") {
    // X_t = sum over grid u of (Z_{t-u} - Z_t) D(u) du with D the x0-measure
    // density (the orientation that reduces to Z_t + Z*D given that D has
    // total mass -1); the trapezoid tail sums reproduce the taps to O(dt^2).
    const double dt = 1.0 / 256.0;
    const double horizon = 16.0;
    sim::LevyDriver drv;
    const auto psi = cf::ou_kernel(1.0, dt, 0.0, horizon);
    const auto inc = sim::simulate_increments(drv, dt, 12000, 0.0, 31337, 0);
    const auto path = sim::moving_average_path(psi, inc);

    const auto m = static_cast<std::size_t>(std::llround(horizon / dt));
    std::vector<double> density(m);  // D(u) = -e^{-u} for the OU delay
    for (std::size_t j = 0; j < m; ++j) density[j] = -std::exp(-dt * static_cast<double>(j));

    std::vector<double> z(inc.values.size() + 1, 0.0);  // Z at grid times
    for (std::size_t i = 0; i < inc.values.size(); ++i) z[i + 1] = z[i] + inc.values[i];

    // path.values[p] sits at increment-grid index m + p (the burn-in offset).
    double err_sq = 0.0, ref_sq = 0.0;
    for (std::size_t p = 0; p < 2000; ++p) {
        const std::size_t kz = m + p;
        double rhs = 0.0;  // trapezoid in u over (0, horizon]
        for (std::size_t j = 1; j <= m; ++j) {
            const double w = (j == m) ? 0.5 : 1.0;
            const double d = j < m ? density[j] : 0.0;
            rhs += w * (z[kz - j] - z[kz]) * d * dt;
        }
        const double lhs = path.values[p];
        err_sq += (lhs - rhs) * (lhs - rhs);
        ref_sq += lhs * lhs;
    }
    CHECK(std::sqrt(err_sq / ref_sq) < 2e-3);
}

TEST_CASE("fractional variance matches the isometry quadrature") {
    const double d_exp = 0.25;
    sim::LevyDriver drv;
    const double dt = 1.0 / 64.0;
    const std::size_t n = 100000;
    const auto z = sim::fractional_noise_increments(d_exp, drv, dt, n, 0.0, 424242, 0, 256.0);

    // Var(Z_1) = \int (theta(1-u) - theta(-u))^2 du by quadrature:
    //   \int_0^1 theta(t)^2 dt + \int_0^inf (theta(1+s) - theta(s))^2 ds.
    const double norm = 1.0 / std::tgamma(1.0 + d_exp);
    double want = 1.0 / (2.0 * d_exp + 1.0) * norm * norm;
    const double h = 1e-3;
    for (double s = 0.5 * h; s < 4000.0; s += h) {
        const double diff = norm * (std::pow(1.0 + s, d_exp) - std::pow(s, d_exp));
        want += diff * diff * h;
    }

    // Empirical variance of unit increments of Z.
    const auto per = static_cast<std::size_t>(std::llround(1.0 / dt));
    double var = 0.0;
    std::size_t cnt = 0;
    for (std::size_t k = 0; k + per <= n; k += per) {
        double zu = 0.0;
        for (std::size_t j = 0; j < per; ++j) zu += z.values[k + j];
        var += zu * zu;
        ++cnt;
    }
    var /= static_cast<double>(cnt);
    CHECK(var == doctest::Approx(want).epsilon(0.05));
}
