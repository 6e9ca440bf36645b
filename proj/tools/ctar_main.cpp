#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "ctar/closed_forms.hpp"
#include "ctar/config.hpp"
#include "ctar/io.hpp"
#include "ctar/kernel_ops.hpp"
#include "ctar/kernel_solver.hpp"
#include "ctar/simd/kernels.hpp"
#include "ctar/simulation.hpp"
#include "ctar/stats.hpp"
#include "ctar/verify.hpp"

namespace fs = std::filesystem;
using ctar::config::RunConfig;

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_dir = "out";
    std::vector<std::string> sets;
    std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "run configuration file");
    cmd->add_option("--out", opts.out_dir, "output directory");
    cmd->add_option("--set", opts.sets, "override a config key (key=value, repeatable)");
    cmd->add_option("--seed", opts.seed, "override run.seed");
}

RunConfig load_config(const CommonOpts& opts, const std::string& command) {
    RunConfig cfg = opts.config_path.empty() ? RunConfig::from_text("")
                                             : RunConfig::from_file(opts.config_path);
    for (const auto& kv : opts.sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw std::runtime_error("--set expects key=value");
        cfg.set_override(kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (opts.seed) cfg.set_override("run.seed", std::to_string(*opts.seed));
    // A config produced by an earlier run carries its command; it must match.
    const std::string cfg_cmd = cfg.get_string("command", command);
    if (cfg_cmd != command)
        throw std::runtime_error("config requests command '" + cfg_cmd + "', invoked '" +
                                 command + "'");
    cfg.set_override("command", "\"" + command + "\"");
    cfg.mark_consumed("command");

    const std::string simd = cfg.get_string("run.simd", std::string("auto"));
    if (simd == "scalar") ctar::simd::force_backend(ctar::simd::Backend::scalar);
    else if (simd == "avx2") ctar::simd::force_backend(ctar::simd::Backend::avx2);
    else if (simd != "auto") throw std::runtime_error("run.simd must be auto, scalar or avx2");
    return cfg;
}

fs::path ensure_out(const CommonOpts& opts) {
    fs::path dir(opts.out_dir);
    fs::create_directories(dir);
    return dir;
}

void finish(RunConfig& cfg, const fs::path& out) {
    cfg.reject_unknown_keys();
    ctar::io::write_text_file(out / "config.txt", cfg.echo());
}

std::string config_hash(const RunConfig& cfg) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(ctar::io::fnv1a(cfg.echo())));
    return buf;
}

ctar::SignedMeasure require_eta(RunConfig& cfg) {
    auto eta = ctar::config::eta_from_config(cfg);
    if (!eta)
        throw std::runtime_error(
            "no delay measure: provide model.eta.*, model.carma or model.ou_lambda");
    return *eta;
}

ctar::solver::StripScanParams strip_params(RunConfig& cfg) {
    ctar::solver::StripScanParams p;
    p.y_max = cfg.get_number("numerics.strip_y_max", 0.0);
    p.y_points = static_cast<int>(cfg.get_int("numerics.strip_points", p.y_points));
    p.zero_tol = cfg.get_number("numerics.strip_zero_tol", p.zero_tol);
    p.a_init = cfg.get_number("numerics.strip_a_init", p.a_init);
    return p;
}

ctar::solver::SolveGrid solve_grid(RunConfig& cfg) {
    ctar::solver::SolveGrid g;
    g.dt = cfg.get_number("numerics.dt", g.dt);
    g.log2_n = static_cast<int>(cfg.get_int("numerics.log2_n", g.log2_n));
    g.causality_tol = cfg.get_number("numerics.causality_tol", g.causality_tol);
    g.aliasing_tol = cfg.get_number("numerics.aliasing_tol", g.aliasing_tol);
    return g;
}

// Kernel driving simulate/acf: an explicit literal, or theta * x0(du) when a
// theta block accompanies the delay measure, or x0 itself.
ctar::SampledKernel resolve_sim_kernel(RunConfig& cfg, double dt) {
    const double horizon = cfg.get_number("numerics.horizon", 64.0);
    if (auto psi = ctar::config::kernel_from_config(cfg, "model.psi", dt, horizon)) return *psi;
    auto eta = ctar::config::eta_from_config(cfg);
    if (!eta) throw std::runtime_error("no kernel: provide model.psi.* or a delay measure");
    const auto strip = ctar::solver::find_strip(*eta, strip_params(cfg));
    ctar::solver::SolveGrid grid = solve_grid(cfg);
    grid.dt = dt;
    // Solve on a window matched to the requested horizon; oversized windows
    // only widen the e^{-cu} dynamic range of the inversion.
    int log2_n = 4;
    while ((std::size_t{1} << log2_n) * dt < 2.0 * horizon && log2_n < 26) ++log2_n;
    grid.log2_n = log2_n;
    const auto x0 = ctar::solver::solve_x0(*eta, strip, grid);
    if (auto theta = ctar::config::kernel_from_config(cfg, "model.theta", dt, horizon)) {
        const auto x0m = ctar::solver::x0_measure(x0, *eta);
        return ctar::solver::convolve_kernel_with_x0_measure(*theta, x0m, horizon);
    }
    return x0;
}

int run_solve_x0(const CommonOpts& opts) {
    RunConfig cfg = load_config(opts, "solve-x0");
    const fs::path out = ensure_out(opts);
    const auto eta = require_eta(cfg);
    const auto strip = ctar::solver::find_strip(eta, strip_params(cfg));
    const auto grid = solve_grid(cfg);
    const auto x0 = ctar::solver::solve_x0(eta, strip, grid);

    ctar::io::write_kernel_csv(out / "x0.csv", x0);
    ctar::io::write_text_file(out / "strip.txt", strip.to_text());

    std::string report;
    report += "resolvent_residual = " + ctar::io::g17(ctar::solver::resolvent_residual(x0, eta)) + "\n";
    report += "mass_identity = " + ctar::io::g17(ctar::solver::mass_identity(x0, eta)) + "\n";
    report += std::string("causal = ") + (strip.causal ? "true" : "false") + "\n";
    ctar::io::write_text_file(out / "identities.txt", report);

    finish(cfg, out);
    return 0;
}

int run_solve_level(const CommonOpts& opts) {
    RunConfig cfg = load_config(opts, "solve-level");
    const fs::path out = ensure_out(opts);

    const double dt = cfg.get_number("numerics.level_dt", 1.0 / 256.0);
    const double horizon = cfg.get_number("numerics.horizon", 32.0);
    const double tol = cfg.get_number("numerics.series_tol", 1e-9);

    // Stationary-increment route.
    if (cfg.has("model.increment_s")) {
        const double s = cfg.get_number("model.increment_s");
        const auto eta = require_eta(cfg);
        auto f = ctar::config::kernel_from_config(cfg, "model.f", dt, horizon);
        if (!f) throw std::runtime_error("increment route needs model.f.*");
        const auto norm = ctar::solver::increment_contraction_norm(eta);
        const auto psi = ctar::solver::increment_solution_kernel(*f, eta, s, tol, horizon);
        ctar::io::write_kernel_csv(out / "psi_increment.csv", psi);

        // Residual of the level equation the increments satisfy.
        ctar::GridDensity gd;
        gd.dt = dt;
        gd.values.resize(static_cast<std::size_t>(
            std::llround(std::ceil(ctar::delay_horizon(eta, 1e-12) / dt))));
        for (std::size_t i = 0; i < gd.values.size(); ++i)
            gd.values[i] = ctar::cdf(eta, dt * static_cast<double>(i));
        ctar::SignedMeasure phi_inc;
        phi_inc.grid_density = std::move(gd);
        const auto theta_s = ctar::linear_combination(1.0, *f, -1.0, f->shifted(s));
        const double residual = ctar::solver::level_fixed_point_residual(psi, phi_inc, theta_s);

        ctar::io::write_text_file(out / "level_report.txt",
                                  "route = increment\nincrement_contraction_norm = " +
                                      ctar::io::g17(norm) +
                                      "\nfixed_point_residual = " + ctar::io::g17(residual) + "\n");
        finish(cfg, out);
        return 0;
    }

    ctar::SignedMeasure phi;
    ctar::SampledKernel theta;
    if (auto arma = ctar::config::arma_from_config(cfg)) {
        auto inputs = ctar::closed_forms::arma_level_inputs(*arma, dt);
        phi = std::move(inputs.phi);
        theta = std::move(inputs.theta);
    } else {
        auto phi_cfg = ctar::config::measure_from_config(cfg, "model.phi");
        auto theta_cfg = ctar::config::kernel_from_config(cfg, "model.theta", dt, horizon);
        if (!phi_cfg || !theta_cfg)
            throw std::runtime_error("level model needs model.phi.* and model.theta.*");
        phi = std::move(*phi_cfg);
        theta = std::move(*theta_cfg);
    }

    ctar::solver::LevelTransformParams tp;
    tp.dt = dt;
    tp.log2_n = static_cast<int>(cfg.get_int("numerics.level_log2_n", tp.log2_n));
    tp.a = cfg.get_number("numerics.level_a", tp.a);

    const std::string route = cfg.get_string("run.route", std::string("auto"));
    const double rho = ctar::total_variation(phi);

    if (route != "auto" && route != "series" && route != "transform")
        throw std::runtime_error("run.route must be auto, series or transform");

    std::optional<ctar::SampledKernel> psi_series, psi_transform;
    std::string report = "rho = " + ctar::io::g17(rho) + "\n";
    if (route == "series" || (route == "auto" && rho < 1.0))
        psi_series = ctar::solver::level_kernel_series(theta, phi, tol, horizon);
    if (route == "transform") {
        psi_transform = ctar::solver::level_kernel_transform(theta, phi, tp);
    } else if (route == "auto") {
        // Both routes when both apply; a transform obstruction is reported,
        // not fatal, as long as the series route produced the kernel.
        try {
            psi_transform = ctar::solver::level_kernel_transform(theta, phi, tp);
        } catch (const std::exception& e) {
            if (!psi_series) throw;
            report += std::string("transform_route_skipped = ") + e.what() + "\n";
        }
    }

    if (psi_series) {
        ctar::io::write_kernel_csv(out / "psi_series.csv", *psi_series);
        report += "series_fixed_point_residual = " +
                  ctar::io::g17(ctar::solver::level_fixed_point_residual(*psi_series, phi, theta)) +
                  "\n";
    }
    if (psi_transform) {
        ctar::io::write_kernel_csv(out / "psi_transform.csv", *psi_transform);
        report += "transform_fixed_point_residual = " +
                  ctar::io::g17(
                      ctar::solver::level_fixed_point_residual(*psi_transform, phi, theta)) +
                  "\n";
    }
    if (psi_series && psi_transform) {
        const double hi = 0.5 * tp.dt * static_cast<double>(std::size_t{1} << tp.log2_n);
        const double gap = ctar::grid_l2_distance(psi_series->clipped(0.0, hi),
                                                  psi_transform->clipped(0.0, hi));
        report += "route_l2_gap = " + ctar::io::g17(gap) + "\n";
    }
    ctar::io::write_text_file(out / "level_report.txt", report);
    finish(cfg, out);
    return 0;
}

int run_simulate(const CommonOpts& opts) {
    RunConfig cfg = load_config(opts, "simulate");
    const fs::path out = ensure_out(opts);

    const double dt = cfg.get_number("numerics.sim_dt", 1.0 / 256.0);
    const auto n = static_cast<std::size_t>(cfg.get_int("run.n_steps", 1 << 16));
    const auto seed = static_cast<std::uint64_t>(cfg.get_int("run.seed", 1));
    const auto stream = static_cast<std::uint32_t>(cfg.get_int("run.stream", 0));
    const double t_start = cfg.get_number("run.t_start", 0.0);
    const double trim = cfg.get_number("numerics.kernel_trim_tol", 1e-4);

    const auto driver = ctar::config::driver_from_config(cfg);
    auto psi = resolve_sim_kernel(cfg, dt).trimmed_tail(trim);

    const auto inc = ctar::sim::simulate_increments(driver, dt, n, t_start, seed, stream);
    const std::string hash = config_hash(cfg);
    const std::string what = cfg.get_string("run.path", std::string("ma"));

    const auto ma = ctar::sim::moving_average_path(psi, inc);
    const double burn_in = ma.t_start - inc.t_start;
    if (what == "ma" || what == "both") ctar::io::write_path_csv(out / "ma.csv", ma, hash, burn_in);

    if (what == "euler" || what == "both") {
        const auto eta = require_eta(cfg);
        const double hist_span = std::max(ctar::delay_horizon(eta, 1e-9), dt);
        const auto hist_n = static_cast<std::size_t>(std::ceil(hist_span / dt)) + 2;
        if (ma.values.size() < hist_n + 2)
            throw std::runtime_error(
                "insufficient history: raise run.n_steps (burn-in plus the delay window exceeds the simulated span)");
        ctar::sim::PathSample init;
        init.dt = dt;
        init.t_start = ma.t_start;
        init.values.assign(ma.values.begin(),
                           ma.values.begin() + static_cast<std::ptrdiff_t>(hist_n));
        ctar::sim::PathSample noise;
        noise.dt = dt;
        noise.t_start = ma.time_at(hist_n - 1);
        const auto j0 = static_cast<std::size_t>(std::llround((noise.t_start - inc.t_start) / dt));
        noise.values.assign(inc.values.begin() + static_cast<std::ptrdiff_t>(j0), inc.values.end());
        noise.seed = seed;
        noise.stream = stream;
        noise.driver_desc = inc.driver_desc;
        const auto euler = ctar::sim::euler_sdde_path(eta, noise, init);
        ctar::io::write_path_csv(out / "euler.csv", euler, hash, burn_in);
    } else if (what != "ma") {
        throw std::runtime_error("run.path must be ma, euler or both");
    }

    finish(cfg, out);
    return 0;
}

int run_acf(const CommonOpts& opts) {
    RunConfig cfg = load_config(opts, "acf");
    const fs::path out = ensure_out(opts);

    const std::string kind = cfg.get_string("acf.kind", std::string("theoretical"));
    std::vector<double> default_lags;
    for (int i = 0; i <= 32; ++i) default_lags.push_back(0.5 * i);
    const auto lags = cfg.get_number_list("acf.lags", default_lags);
    const auto driver = ctar::config::driver_from_config(cfg);

    ctar::stats::AcfCurve curve;
    if (kind == "theoretical") {
        const double dt = cfg.get_number("numerics.sim_dt", 1.0 / 256.0);
        const auto psi = resolve_sim_kernel(cfg, dt);
        curve = ctar::stats::theoretical_acf(psi, driver.second_moment(), lags);
    } else if (kind == "empirical") {
        const double dt = cfg.get_number("numerics.sim_dt", 1.0 / 256.0);
        const auto n = static_cast<std::size_t>(cfg.get_int("run.n_steps", 1 << 18));
        const auto seed = static_cast<std::uint64_t>(cfg.get_int("run.seed", 1));
        const auto stream = static_cast<std::uint32_t>(cfg.get_int("run.stream", 0));
        const double trim = cfg.get_number("numerics.kernel_trim_tol", 1e-4);
        const auto psi = resolve_sim_kernel(cfg, dt).trimmed_tail(trim);
        const auto inc = ctar::sim::simulate_increments(driver, dt, n, 0.0, seed, stream);
        const auto path = ctar::sim::moving_average_path(psi, inc);
        curve = ctar::stats::empirical_acf(path, lags);
    } else {
        throw std::runtime_error("acf.kind must be theoretical or empirical");
    }
    ctar::io::write_acf_csv(out / "acf.csv", curve);

    if (cfg.has("acf.fit_window")) {
        const auto w = cfg.get_number_list("acf.fit_window");
        if (w.size() != 2) throw std::runtime_error("acf.fit_window must be [t_min, t_max]");
        const auto fit = ctar::stats::long_memory_fit(curve, w[0], w[1]);
        ctar::io::write_text_file(out / "fit.txt", fit.to_text(w[0], w[1]));
    }
    finish(cfg, out);
    return 0;
}

int run_verify(bool full) {
    const auto results = full ? ctar::verify::run_all_criteria() : ctar::verify::run_fast_suite();
    bool all = true;
    for (const auto& r : results) {
        std::printf("%s  %s (%s)\n", r.pass ? "PASS" : "FAIL", r.name.c_str(), r.detail.c_str());
        all = all && r.pass;
    }
    std::printf("%s\n", all ? "all checks passed" : "CHECKS FAILED");
    return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"continuous-time autoregressive kernels: solve, simulate, verify"};
    app.require_subcommand(1);

    CommonOpts o_x0, o_level, o_sim, o_acf;
    bool verify_full = false;

    auto* c_x0 = app.add_subcommand("solve-x0", "solve the autoregressive kernel of a delay measure");
    add_common(c_x0, o_x0);
    auto* c_level = app.add_subcommand("solve-level", "solve the level-model kernel");
    add_common(c_level, o_level);
    auto* c_sim = app.add_subcommand("simulate", "simulate moving-average / delay-equation paths");
    add_common(c_sim, o_sim);
    auto* c_acf = app.add_subcommand("acf", "theoretical or empirical autocovariance");
    add_common(c_acf, o_acf);
    auto* c_verify = app.add_subcommand("verify", "run the closed-form identity suite");
    c_verify->add_flag("--full", verify_full, "include the Monte Carlo acceptance criteria");

    CLI11_PARSE(app, argc, argv);

    try {
        if (c_x0->parsed()) return run_solve_x0(o_x0);
        if (c_level->parsed()) return run_solve_level(o_level);
        if (c_sim->parsed()) return run_simulate(o_sim);
        if (c_acf->parsed()) return run_acf(o_acf);
        if (c_verify->parsed()) return run_verify(verify_full);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
