#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ctar/closed_forms.hpp"
#include "ctar/stats.hpp"

using namespace ctar;
namespace cf = closed_forms;

TEST_CASE("theoretical acf of the ou kernel") {
    const double dt = 1.0 / 1024.0;
    const auto psi = cf::ou_kernel(1.0, dt, 0.0, 40.0);
    const auto acf = stats::theoretical_acf(psi, 1.0, {0.0, 0.5, 1.0, 2.0});
    for (std::size_t i = 0; i < acf.lags.size(); ++i)
        CHECK(acf.values[i] == doctest::Approx(0.5 * std::exp(-acf.lags[i])).epsilon(1e-5));
}

TEST_CASE("theoretical acf of the unit step is the triangle") {
    const double dt = 1.0 / 256.0;
    const auto psi = cf::staircase_kernel({1.0}, dt);
    const auto acf = stats::theoretical_acf(psi, 2.0, {0.0, 0.25, 0.5, 1.0, 1.5});
    CHECK(acf.values[0] == doctest::Approx(2.0).epsilon(1e-12));   // m2 * ||psi||^2
    CHECK(acf.values[1] == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(acf.values[2] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(acf.values[3] == doctest::Approx(0.0));
    CHECK(acf.values[4] == doctest::Approx(0.0));
}

TEST_CASE("acf correlation invariance under time shift") {
    const double dt = 1.0 / 128.0;
    const auto psi = cf::ou_kernel(1.0, dt, 0.0, 24.0);
    const auto shifted = psi.shifted(3.0);
    const std::vector<double> lags{0.0, 0.5, 1.5};
    const auto a = stats::theoretical_acf(psi, 1.0, lags);
    const auto b = stats::theoretical_acf(shifted, 1.0, lags);
    for (std::size_t i = 0; i < lags.size(); ++i)
        CHECK(a.values[i] == doctest::Approx(b.values[i]).epsilon(1e-12));
}

TEST_CASE("empirical acf basics") {
    sim::PathSample zero;
    zero.dt = 0.5;
    zero.t_start = 0.0;
    zero.values.assign(1000, 0.0);
    const auto z = stats::empirical_acf(zero, {0.0, 0.5, 1.0});
    for (double v : z.values) CHECK(v == 0.0);

    // i.i.d. samples decorrelate beyond lag zero.
    sim::LevyDriver d;
    const auto inc = sim::simulate_increments(d, 1.0, 200000, 0.0, 321, 0);
    const auto acf = stats::empirical_acf(inc, {0.0, 1.0, 2.0, 5.0});
    CHECK(acf.values[0] == doctest::Approx(1.0).epsilon(0.02));
    for (std::size_t i = 1; i < acf.values.size(); ++i)
        CHECK(std::fabs(acf.values[i]) < 0.02);

    CHECK_THROWS_AS(stats::empirical_acf(inc, {300000.0}), std::invalid_argument);
}

TEST_CASE("empirical acf of an ou path tracks the theoretical curve") {
    const double dt = 1.0 / 64.0;
    sim::LevyDriver drv;
    const auto psi = cf::ou_kernel(1.0, dt, 0.0, 16.0);
    const auto inc = sim::simulate_increments(drv, dt, 400000, 0.0, 271828, 0);
    const auto path = sim::moving_average_path(psi, inc, 1e-2);
    const std::vector<double> lags{0.0, 0.5, 1.0, 2.0};
    const auto emp = stats::empirical_acf(path, lags);
    const auto theo = stats::theoretical_acf(psi, 1.0, lags);
    for (std::size_t i = 0; i < lags.size(); ++i) {
        // Batch-means error bar of the lagged product series.
        const auto lag = static_cast<std::size_t>(std::llround(lags[i] / dt));
        std::vector<double> prod(path.values.size() - lag);
        for (std::size_t k = 0; k < prod.size(); ++k)
            prod[k] = path.values[k] * path.values[k + lag];
        const auto bm = stats::batch_means(prod, 32);
        CHECK(std::fabs(emp.values[i] - theo.values[i]) <= 3.0 * bm.stderr_mean + 1e-3);
    }
}

TEST_CASE("long memory fit on an exact power law") {
    stats::AcfCurve acf;
    const double c = 0.39894, slope = -0.5;
    for (double t = 10.0; t <= 80.0; t += 2.5) {
        acf.lags.push_back(t);
        acf.values.push_back(c * std::pow(t, slope));
    }
    const auto fit = stats::long_memory_fit(acf, 20.0, 60.0);
    CHECK(fit.slope == doctest::Approx(slope).epsilon(1e-12));
    CHECK(fit.constant == doctest::Approx(c).epsilon(1e-12));
    CHECK(fit.residual < 1e-12);
    CHECK(fit.to_text(20.0, 60.0).find("slope") != std::string::npos);
}

TEST_CASE("short-memory curves fit far below the long-memory slope") {
    const double dt = 1.0 / 128.0;
    const auto psi = cf::ou_kernel(1.0, dt, 0.0, 80.0);
    std::vector<double> lags;
    for (double t = 20.0; t <= 60.0; t += 5.0) lags.push_back(t);
    const auto acf = stats::theoretical_acf(psi, 1.0, lags);
    const auto fit = stats::long_memory_fit(acf, 20.0, 60.0);
    CHECK(fit.slope < -1.0);  // exponential decay: not long memory
}

TEST_CASE("fit window rejects sign changes") {
    stats::AcfCurve acf;
    acf.lags = {20.0, 30.0, 40.0};
    acf.values = {0.1, -0.05, 0.02};
    CHECK_THROWS_WITH_AS(stats::long_memory_fit(acf, 20.0, 60.0),
                         doctest::Contains("asymptotic regime"), std::runtime_error);
}

TEST_CASE("batch means standard error tracks iid scaling") {
    sim::LevyDriver d;
    const auto inc = sim::simulate_increments(d, 1.0, 64000, 0.0, 99, 0);
    const auto bm = stats::batch_means(inc.values, 32);
    CHECK(std::fabs(bm.mean) < 4.0 / std::sqrt(64000.0));
    // SE should be near 1/sqrt(n) for unit-variance iid data.
    CHECK(bm.stderr_mean == doctest::Approx(1.0 / std::sqrt(64000.0)).epsilon(0.5));
}
