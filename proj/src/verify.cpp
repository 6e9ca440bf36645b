#include "ctar/verify.hpp"

#include <cmath>
#include <cstdio>
#include <future>
#include <stdexcept>

#include "ctar/closed_forms.hpp"
#include "ctar/kernel_ops.hpp"
#include "ctar/kernel_solver.hpp"
#include "ctar/sampled_kernel.hpp"
#include "ctar/signed_measure.hpp"
#include "ctar/simulation.hpp"
#include "ctar/stats.hpp"

namespace ctar::verify {

namespace {

namespace cf = closed_forms;

std::string fmt(const char* pattern, double a, double b = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof buf, pattern, a, b);
    return buf;
}

CheckResult check_leq(const std::string& name, double observed, double bound) {
    CheckResult r;
    r.name = name;
    r.pass = observed <= bound;
    r.detail = fmt("observed %.3g vs bound %.3g", observed, bound);
    return r;
}

CheckResult check_in(const std::string& name, double observed, double lo, double hi) {
    CheckResult r;
    r.name = name;
    r.pass = observed >= lo && observed <= hi;
    r.detail = fmt("observed %.4g, accepted range ", observed) + fmt("[%.3g, %.3g]", lo, hi);
    return r;
}

struct EtaFixture {
    std::string name;
    SignedMeasure eta;
    solver::SolveGrid grid;
};

std::vector<EtaFixture> shipped_eta_fixtures() {
    std::vector<EtaFixture> fx;
    solver::SolveGrid base;  // dt = 2^-10, N = 2^16
    fx.push_back({"ou(+1)", SignedMeasure::dirac(0.0, -1.0), base});
    fx.push_back({"ou(-1)", SignedMeasure::dirac(0.0, 1.0), base});
    fx.push_back({"carma(3,2,1.5)", cf::carma_delay_measure({3.0, 2.0, 1.5}), base});
    fx.push_back({"gamma-i(-2,1,0.5,1)", cf::gamma_delay_measure(-2.0, 1.0, 0.5, 1.0), base});
    solver::SolveGrid wide = base;
    wide.log2_n = 18;  // slow-decay fixture needs a 256-unit window
    fx.push_back({"gamma-ii(-1,-1,0.5,0.1)", cf::gamma_delay_measure(-1.0, -1.0, 0.5, 0.1), wide});
    return fx;
}

SampledKernel solve_fixture(const EtaFixture& fx) {
    const auto strip = solver::find_strip(fx.eta);
    return solver::solve_x0(fx.eta, strip, fx.grid);
}

// ---- criterion 1 ----------------------------------------------------------

std::vector<CheckResult> criterion_ou_exactness() {
    std::vector<CheckResult> out;
    const solver::SolveGrid grid;  // dt = 2^-10, N = 2^16
    for (double lam : {0.5, 1.0, 2.0}) {
        const auto eta = SignedMeasure::dirac(0.0, -lam);
        const auto x0 = solver::solve_x0(eta, solver::find_strip(eta), grid);
        const auto oracle =
            cf::ou_kernel(lam, grid.dt, x0.t0, x0.t0 + grid.dt * static_cast<double>(x0.size()));
        out.push_back(check_leq(fmt("ou exactness lambda=%.3g", lam),
                                grid_sup_distance(x0, oracle), 1e-3));
    }
    for (double lam : {-0.5, -1.0}) {
        const auto eta = SignedMeasure::dirac(0.0, -lam);
        const auto x0 = solver::solve_x0(eta, solver::find_strip(eta), grid);
        const auto oracle =
            cf::ou_kernel(lam, grid.dt, x0.t0, x0.t0 + grid.dt * static_cast<double>(x0.size()));
        out.push_back(check_leq(fmt("ou exactness (noncausal) lambda=%.3g", lam),
                                grid_sup_distance(x0, oracle), 1e-3));
    }
    return out;
}

// ---- criteria 2 and 3 -----------------------------------------------------

std::vector<CheckResult> criterion_resolvent() {
    std::vector<CheckResult> out;
    for (const auto& fx : shipped_eta_fixtures()) {
        const auto strip = solver::find_strip(fx.eta);
        const auto x0 = solver::solve_x0(fx.eta, strip, fx.grid);
        out.push_back(check_leq("resolvent residual " + fx.name,
                                solver::resolvent_residual(x0, fx.eta), 1e-3));
        solver::SolveGrid fine = fx.grid;
        fine.dt *= 0.5;
        fine.log2_n += 1;  // same window, halved step
        const auto x0f = solver::solve_x0(fx.eta, strip, fine);
        out.push_back(check_leq("resolvent residual (refined) " + fx.name,
                                solver::resolvent_residual(x0f, fx.eta), 1e-4));
    }
    return out;
}

std::vector<CheckResult> criterion_mass_identity() {
    std::vector<CheckResult> out;
    for (const auto& fx : shipped_eta_fixtures()) {
        const auto x0 = solve_fixture(fx);
        out.push_back(check_leq("mass identity " + fx.name,
                                std::fabs(solver::mass_identity(x0, fx.eta) + 1.0), 1e-3));
    }
    return out;
}

// ---- criterion 4 ----------------------------------------------------------

std::vector<CheckResult> criterion_carma() {
    std::vector<CheckResult> out;
    const solver::SolveGrid grid;
    {
        const cf::CarmaSpec spec{3.0, 2.0, 1.5};
        const auto eta = cf::carma_delay_measure(spec);
        const auto x0 = solver::solve_x0(eta, solver::find_strip(eta), grid);
        const auto oracle =
            cf::carma21_kernel(spec, grid.dt, grid.dt * static_cast<double>(x0.size()));
        out.push_back(
            check_leq("carma(3,2,1.5) vs residue oracle", grid_l2_distance(x0, oracle), 1e-3));
    }
    {
        const cf::CarmaSpec spec{3.0, 2.0, 1.0};  // density coefficient cancels
        const auto eta = cf::carma_delay_measure(spec);
        const auto x0 = solver::solve_x0(eta, solver::find_strip(eta), grid);
        const auto oracle =
            cf::ou_kernel(2.0, grid.dt, 0.0, grid.dt * static_cast<double>(x0.size()));
        out.push_back(
            check_leq("carma(3,2,1) degenerates to ou(2)", grid_l2_distance(x0, oracle), 1e-3));
    }
    return out;
}

// ---- criterion 5 ----------------------------------------------------------

SampledKernel indicator_theta(double dt) { return cf::staircase_kernel({1.0}, dt); }

std::vector<CheckResult> criterion_level_routes() {
    std::vector<CheckResult> out;
    const solver::LevelTransformParams tp;  // dt = 2^-8, N = 2^13
    const double dt = tp.dt;
    const auto theta = indicator_theta(dt);
    const double compare_hi = 16.0;

    auto compare_routes = [&](const std::string& name, const SignedMeasure& phi) {
        const auto series = solver::level_kernel_series(theta, phi, 1e-9, 32.0);
        const auto transform = solver::level_kernel_transform(theta, phi, tp);
        const double gap = grid_l2_distance(series.clipped(0.0, compare_hi),
                                            transform.clipped(0.0, compare_hi));
        out.push_back(check_leq("level routes agree " + name, gap, 1e-4));
    };

    SignedMeasure phi_atom;
    phi_atom.atoms.push_back({1.0, 0.5});
    compare_routes("phi=0.5*delta_1", phi_atom);

    SignedMeasure phi_exp;
    phi_exp.gamma_terms.push_back({0.5, 1.0, 1.0});  // 0.5 e^{-u} du
    compare_routes("phi=0.5exp", phi_exp);

    // Non-contraction case: only the transform route applies.
    SignedMeasure phi_neg;
    phi_neg.gamma_terms.push_back({-2.0, 1.0, 1.0});  // -2 e^{-u} du, |phi| = 2
    bool series_rejected = false;
    try {
        (void)solver::level_kernel_series(theta, phi_neg, 1e-9, 32.0);
    } catch (const std::runtime_error&) {
        series_rejected = true;
    }
    CheckResult gate;
    gate.name = "series route rejects |phi| = 2";
    gate.pass = series_rejected;
    gate.detail = series_rejected ? "contraction gate fired" : "series route did not reject";
    out.push_back(gate);

    const auto psi = solver::level_kernel_transform(theta, phi_neg, tp);
    out.push_back(check_leq("level fixed point residual (alpha/beta=-2)",
                            solver::level_fixed_point_residual(psi, phi_neg, theta), 1e-3));
    return out;
}

// ---- criterion 6 ----------------------------------------------------------

std::vector<CheckResult> criterion_arma() {
    std::vector<CheckResult> out;
    const double dt = 1.0 / 256.0;
    const std::vector<cf::ArmaSpec> specs = {
        {{0.5}, {}}, {{0.5}, {0.4}}, {{0.3, -0.2}, {0.5}}};
    for (const auto& spec : specs) {
        const auto inputs = cf::arma_level_inputs(spec, dt);
        const auto psi = solver::level_kernel_series(inputs.theta, inputs.phi, 1e-10, 32.0);
        const auto weights = cf::arma_psi_weights(spec, 24);
        double worst = 0.0;
        for (int j = 0; j <= 24; ++j) {
            const double got = psi.value_at(static_cast<double>(j));
            worst = std::max(worst, std::fabs(got - weights[static_cast<std::size_t>(j)]));
        }
        std::string label = "arma psi weights phi=" + std::to_string(spec.phi.size()) +
                            " theta=" + std::to_string(spec.theta.size());
        out.push_back(check_leq(label, worst, 1e-6));
    }

    // Simulated path satisfies the difference-equation recursion exactly.
    {
        const cf::ArmaSpec spec{{0.5}, {0.4}};
        const auto weights = cf::arma_psi_weights(spec, 47);
        const auto psi = cf::staircase_kernel(weights, dt);
        sim::LevyDriver driver;  // standard Brownian
        const auto inc = sim::simulate_increments(driver, dt, 1 << 15, 0.0, 99017, 0);
        const auto path = sim::moving_average_path(psi, inc, 1e-2);

        auto z_at = [&](double t) {
            // Z_t = L_t - L_{t-1}: sum of increments with u_j in [t-1, t).
            const auto k1 = static_cast<std::size_t>(std::llround((t - 1.0 - inc.t_start) / dt));
            double s = 0.0;
            for (std::size_t j = 0; j < static_cast<std::size_t>(std::llround(1.0 / dt)); ++j)
                s += inc.values[k1 + j];
            return s;
        };
        auto x_at = [&](double t) {
            return path.values[static_cast<std::size_t>(std::llround((t - path.t_start) / dt))];
        };
        const double t_lo = std::ceil(path.t_start + 2.0);
        double worst = 0.0;
        for (double t = t_lo; t < t_lo + 24.0; t += 1.0) {
            const double r = x_at(t) - 0.5 * x_at(t - 1.0) - z_at(t) - 0.4 * z_at(t - 1.0);
            worst = std::max(worst, std::fabs(r));
        }
        out.push_back(check_leq("arma path recursion residual", worst, 1e-10));
    }
    return out;
}

// ---- criterion 7 ----------------------------------------------------------

struct EquivalenceFixture {
    std::string name;
    SignedMeasure eta;
    SampledKernel (*kernel)(double dt);
};

SampledKernel ou_equiv_kernel(double dt) { return cf::ou_kernel(1.0, dt, 0.0, 26.0); }
SampledKernel carma_equiv_kernel(double dt) { return cf::carma21_kernel({3.0, 2.0, 1.5}, dt, 26.0); }

double equivalence_rmse(const SignedMeasure& eta, const SampledKernel& psi,
                        const sim::PathSample& increments, double window) {
    const auto ma = sim::moving_average_path(psi, increments, 1e-2);
    // Drive Euler with the same increments over [0, window], history from the
    // moving-average path.
    const double dt = increments.dt;
    const auto k0 = static_cast<std::size_t>(std::llround((0.0 - ma.t_start) / dt));
    const double hist_span = std::max(delay_horizon(eta, 1e-9), dt);
    const auto hist_n = static_cast<std::size_t>(std::ceil(hist_span / dt)) + 2;
    if (ma.t_start > 0.0 || k0 < hist_n - 1 || k0 + 1 > ma.values.size())
        throw std::logic_error("equivalence fixture window does not cover the delay history");

    sim::PathSample init;
    init.dt = dt;
    init.t_start = -dt * static_cast<double>(hist_n - 1);
    init.values.assign(ma.values.begin() + static_cast<std::ptrdiff_t>(k0 - (hist_n - 1)),
                       ma.values.begin() + static_cast<std::ptrdiff_t>(k0 + 1));

    sim::PathSample noise;
    noise.dt = dt;
    noise.t_start = 0.0;
    const auto j0 = static_cast<std::size_t>(std::llround((0.0 - increments.t_start) / dt));
    const auto n_steps = static_cast<std::size_t>(std::llround(window / dt));
    noise.values.assign(increments.values.begin() + static_cast<std::ptrdiff_t>(j0),
                        increments.values.begin() + static_cast<std::ptrdiff_t>(j0 + n_steps));

    const auto euler = sim::euler_sdde_path(eta, noise, init);

    double ss = 0.0;
    for (std::size_t k = 0; k <= n_steps; ++k) {
        const double diff = euler.values[k] - ma.values[k0 + k];
        ss += diff * diff;
    }
    return std::sqrt(ss / static_cast<double>(n_steps + 1));
}

std::vector<CheckResult> criterion_equivalence() {
    std::vector<CheckResult> out;
    const double window = 50.0;
    const int reps = 32;
    const std::uint64_t seed = 31850;
    const std::vector<EquivalenceFixture> fixtures = {
        {"ou", SignedMeasure::dirac(0.0, -1.0), &ou_equiv_kernel},
        {"carma", cf::carma_delay_measure({3.0, 2.0, 1.5}), &carma_equiv_kernel}};

    for (const auto& fx : fixtures) {
        const double dt_fine = 1.0 / 512.0;
        const auto psi_fine = fx.kernel(dt_fine);
        const auto psi_coarse = fx.kernel(2.0 * dt_fine);

        std::vector<double> rmse_fine(reps), rmse_coarse(reps);
        // Lead-in covers the kernel burn-in plus the delay history window.
        const double lead = 45.0;
        auto run_rep = [&](int r) {
            const auto n =
                static_cast<std::size_t>(std::llround((window + lead) / dt_fine)) + 8;
            const auto inc = sim::simulate_increments({}, dt_fine, n, -lead, seed,
                                                      static_cast<std::uint32_t>(r));
            rmse_fine[static_cast<std::size_t>(r)] = equivalence_rmse(fx.eta, psi_fine, inc, window);
            sim::PathSample coarse;
            coarse.dt = 2.0 * dt_fine;
            coarse.t_start = inc.t_start;
            coarse.seed = inc.seed;
            coarse.stream = inc.stream;
            coarse.values.resize(inc.values.size() / 2);
            for (std::size_t j = 0; j < coarse.values.size(); ++j)
                coarse.values[j] = inc.values[2 * j] + inc.values[2 * j + 1];
            rmse_coarse[static_cast<std::size_t>(r)] =
                equivalence_rmse(fx.eta, psi_coarse, coarse, window);
        };

        std::vector<std::future<void>> jobs;
        for (int r = 0; r < reps; ++r)
            jobs.push_back(std::async(std::launch::async, run_rep, r));
        for (auto& j : jobs) j.get();

        double mean_fine = 0.0, mean_coarse = 0.0;
        for (int r = 0; r < reps; ++r) {
            mean_fine += rmse_fine[static_cast<std::size_t>(r)];
            mean_coarse += rmse_coarse[static_cast<std::size_t>(r)];
        }
        const double ratio = mean_fine / mean_coarse;  // RMSE(dt/2) / RMSE(dt)
        out.push_back(check_in("representation equivalence rmse ratio " + fx.name, ratio, 0.35,
                               0.65));
    }
    return out;
}

// ---- criterion 8 ----------------------------------------------------------

std::vector<CheckResult> criterion_isometry() {
    const double dt = 1.0 / 256.0;
    const auto psi = cf::ou_kernel(1.0, dt, 0.0, 16.0);
    sim::LevyDriver driver;  // sigma^2 = 1, no jumps
    const std::size_t n = 1000000;
    const auto m = psi.values.size();
    const auto inc = sim::simulate_increments(driver, dt, n + m, 0.0, 74210, 0);
    const auto path = sim::moving_average_path(psi, inc, 1e-4);
    std::vector<double> sq(path.values.size());
    for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = path.values[i] * path.values[i];
    const auto bm = stats::batch_means(sq, 32);
    const double err = std::fabs(bm.mean - 0.5);
    CheckResult r;
    r.name = "isometry: var within 3 SE of 1/2";
    r.pass = err <= 3.0 * bm.stderr_mean;
    r.detail = fmt("var %.5g, 3*SE %.3g", bm.mean, 3.0 * bm.stderr_mean);
    return {r};
}

// ---- criterion 9 ----------------------------------------------------------

std::vector<CheckResult> criterion_long_memory() {
    std::vector<CheckResult> out;
    const double d = 0.25;
    const double dt = 1.0 / 32.0;
    const double psi_horizon = 65536.0;
    const auto theta = cf::fractional_theta(d, dt, psi_horizon);
    // x0(du) = delta_0 - e^{-u} du for the OU delay, in exact parametric form:
    // the growing fractional kernel amplifies any quadrature bias in the
    // measure's total mass, so the cell masses must be exact here.
    SignedMeasure x0_measure_exact;
    x0_measure_exact.atoms.push_back({0.0, 1.0});
    x0_measure_exact.gamma_terms.push_back({-1.0, 1.0, 1.0});
    const auto psi = convolve_with_measure(theta, x0_measure_exact, psi_horizon);

    std::vector<double> lags;
    for (int i = 0; i < 24; ++i) {
        const double t = 20.0 * std::pow(60.0 / 20.0, static_cast<double>(i) / 23.0);
        lags.push_back(dt * std::llround(t / dt));
    }
    const auto acf = stats::theoretical_acf(psi, 1.0, lags);
    const auto fit = stats::long_memory_fit(acf, 19.9, 60.1);
    out.push_back(check_in("long memory slope (target -0.5)", fit.slope, -0.55, -0.45));
    const double c_target = cf::long_memory_constant(d, 1.0, 1.0);
    out.push_back(check_in("long memory constant (target 0.39894)", fit.constant,
                           0.9 * c_target, 1.1 * c_target));
    return out;
}

// ---- criterion 10 ---------------------------------------------------------

std::vector<CheckResult> criterion_increment_route() {
    std::vector<CheckResult> out;
    SignedMeasure eta;
    eta.gamma_terms.push_back({1.0, 1.0, 1.0});   // e^{-v} dv
    eta.gamma_terms.push_back({-2.0, 1.0, 2.0});  // -2 e^{-2v} dv
    const double dt = 1.0 / 256.0;
    const auto f = indicator_theta(dt);

    const auto psi_s = solver::increment_solution_kernel(f, eta, 1.0, 1e-8, 32.0);

    // Rebuild the level inputs the route used, through the public surface.
    const double horizon = delay_horizon(eta, 1e-12);
    GridDensity gd;
    gd.dt = dt;
    gd.values.resize(static_cast<std::size_t>(std::llround(std::ceil(horizon / dt))));
    for (std::size_t i = 0; i < gd.values.size(); ++i)
        gd.values[i] = cdf(eta, dt * static_cast<double>(i));
    SignedMeasure phi_inc;
    phi_inc.grid_density = std::move(gd);
    const auto theta_s = linear_combination(1.0, f, -1.0, f.shifted(1.0));

    out.push_back(check_leq("increment route fixed point residual",
                            solver::level_fixed_point_residual(psi_s, phi_inc, theta_s), 1e-3));

    bool rejected = false;
    std::string msg;
    try {
        (void)solver::increment_solution_kernel(f, eta.scaled(2.5), 1.0, 1e-8, 32.0);
    } catch (const std::runtime_error& e) {
        rejected = true;
        msg = e.what();
    }
    CheckResult gate;
    gate.name = "increment admissibility gate (scaled 2.5)";
    gate.pass = rejected && msg.find("contraction") != std::string::npos;
    gate.detail = rejected ? msg : "no rejection";
    out.push_back(gate);
    return out;
}

// ---- criterion 11 ---------------------------------------------------------

std::vector<CheckResult> criterion_degeneracy() {
    std::vector<CheckResult> out;
    auto expect_axis_zero = [&](const std::string& name, const SignedMeasure& eta) {
        CheckResult r;
        r.name = name;
        try {
            (void)solver::find_strip(eta);
            r.pass = false;
            r.detail = "strip scan unexpectedly succeeded";
        } catch (const std::runtime_error& e) {
            const std::string msg = e.what();
            r.pass = msg.find("vanishes on axis") != std::string::npos &&
                     msg.find("y = 0") != std::string::npos;
            r.detail = msg;
        }
        out.push_back(r);
    };
    expect_axis_zero("degeneracy: eta = 0", SignedMeasure::zero());
    SignedMeasure zero_mass;
    zero_mass.gamma_terms.push_back({1.0, 1.0, 1.0});
    zero_mass.gamma_terms.push_back({-2.0, 1.0, 2.0});
    expect_axis_zero("degeneracy: zero-mass density", zero_mass);
    return out;
}

}  // namespace

std::vector<CheckResult> run_criterion(int index) {
    switch (index) {
        case 1: return criterion_ou_exactness();
        case 2: return criterion_resolvent();
        case 3: return criterion_mass_identity();
        case 4: return criterion_carma();
        case 5: return criterion_level_routes();
        case 6: return criterion_arma();
        case 7: return criterion_equivalence();
        case 8: return criterion_isometry();
        case 9: return criterion_long_memory();
        case 10: return criterion_increment_route();
        case 11: return criterion_degeneracy();
        default: throw std::invalid_argument("criterion index must be 1..11");
    }
}

std::vector<CheckResult> run_fast_suite() {
    std::vector<CheckResult> out;
    for (int k : {1, 2, 3, 4, 5, 6, 9, 10, 11}) {
        auto r = run_criterion(k);
        out.insert(out.end(), r.begin(), r.end());
    }
    return out;
}

std::vector<CheckResult> run_all_criteria() {
    std::vector<CheckResult> out;
    for (int k = 1; k <= kCriteriaCount; ++k) {
        auto r = run_criterion(k);
        out.insert(out.end(), r.begin(), r.end());
    }
    return out;
}

}  // namespace ctar::verify
