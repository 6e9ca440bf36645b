#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ctar/config.hpp"

using namespace ctar;
using config::RunConfig;

namespace {

const char* kSample = R"(
# stationary OU run
command = solve-x0
[model]
eta.atoms = [[0.0, -1.0]]
[numerics]
dt = 0.0009765625
log2_n = 16
[run]
seed = 42
)";

}  // namespace

TEST_CASE("parse sections, comments and typed getters") {
    auto cfg = RunConfig::from_text(kSample);
    CHECK(cfg.get_string("command") == "solve-x0");
    CHECK(cfg.get_number("numerics.dt") == doctest::Approx(0.0009765625));
    CHECK(cfg.get_int("numerics.log2_n") == 16);
    CHECK(cfg.get_int("run.seed") == 42);
    const auto atoms = cfg.get_number_table("model.eta.atoms");
    REQUIRE(atoms.size() == 1);
    CHECK(atoms[0][1] == doctest::Approx(-1.0));
    CHECK_NOTHROW(cfg.reject_unknown_keys());
}

TEST_CASE("defaults are recorded in the echo and reparse identically") {
    auto cfg = RunConfig::from_text(kSample);
    (void)cfg.get_string("command");
    (void)cfg.get_number_table("model.eta.atoms");
    (void)cfg.get_number("numerics.dt");
    (void)cfg.get_int("numerics.log2_n");
    (void)cfg.get_int("run.seed");
    (void)cfg.get_number("numerics.horizon", 64.0);  // defaulted key
    const auto echoed = cfg.echo();
    CHECK(echoed.find("horizon = 64.0") != std::string::npos);

    auto again = RunConfig::from_text(echoed);
    (void)again.get_string("command");
    (void)again.get_number_table("model.eta.atoms");
    (void)again.get_number("numerics.dt");
    (void)again.get_int("numerics.log2_n");
    (void)again.get_int("run.seed");
    (void)again.get_number("numerics.horizon", 0.0);
    CHECK(again.echo() == echoed);
}

TEST_CASE("unknown keys are rejected") {
    auto cfg = RunConfig::from_text("foo = 1\n");
    CHECK_THROWS_WITH_AS(cfg.reject_unknown_keys(), doctest::Contains("unknown config key: foo"),
                         std::runtime_error);
}

TEST_CASE("overrides win") {
    auto cfg = RunConfig::from_text("run.seed = 1\n");
    cfg.set_override("run.seed", "7");
    CHECK(cfg.get_int("run.seed") == 7);
}

TEST_CASE("type errors are loud") {
    auto cfg = RunConfig::from_text("x = [1,2]\ny = oops\n");
    CHECK_THROWS_AS(cfg.get_number("x"), std::runtime_error);
    CHECK_THROWS_AS(cfg.get_number("y"), std::runtime_error);
    CHECK_THROWS_AS(cfg.get_number("missing"), std::runtime_error);
}

TEST_CASE("model builders") {
    auto cfg = RunConfig::from_text(R"(
[model]
eta.atoms = [[0.0, -1.5]]
eta.gamma = [[0.25, 1.0, 1.5]]
theta.steps = [1.0, 0.4]
arma_phi = [0.5]
arma_theta = [0.4]
[driver]
sigma2 = 2.0
jump_law = two_point
jump_rate = 1.0
jump_param = 0.5
)");
    const auto eta = config::eta_from_config(cfg);
    REQUIRE(eta.has_value());
    CHECK(total_variation(*eta) == doctest::Approx(1.5 + 0.25 / 1.5));

    const auto theta = config::kernel_from_config(cfg, "model.theta", 0.125, 16.0);
    REQUIRE(theta.has_value());
    CHECK(theta->value_at(1.5) == doctest::Approx(0.4));

    const auto arma = config::arma_from_config(cfg);
    REQUIRE(arma.has_value());
    CHECK(arma->phi == std::vector<double>{0.5});

    const auto driver = config::driver_from_config(cfg);
    CHECK(driver.second_moment() == doctest::Approx(2.0 + 0.25));
}

TEST_CASE("carma shorthand") {
    auto cfg = RunConfig::from_text("model.carma = [3.0, 2.0, 1.5]\n");
    const auto eta = config::eta_from_config(cfg);
    REQUIRE(eta.has_value());
    CHECK(eta->weight_at_zero() == doctest::Approx(-1.5));
}
