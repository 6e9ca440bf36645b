#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ctar/closed_forms.hpp"
#include "ctar/sampled_kernel.hpp"
#include "ctar/signed_measure.hpp"
#include "ctar/simulation.hpp"

namespace ctar::config {

// Flat structured-text run configuration: `key = value` lines, `[section]`
// headers prefixing subsequent keys, `#` comments.  Values are JSON literals
// (numbers, arrays, strings); bare words load as strings.  Every key must be
// consumed by the command that runs, otherwise the run is rejected.
class RunConfig {
public:
    static RunConfig from_file(const std::filesystem::path& file);
    static RunConfig from_text(const std::string& text);

    void set_override(const std::string& key, const std::string& value);

    bool has(const std::string& key) const;
    double get_number(const std::string& key, std::optional<double> fallback = std::nullopt);
    std::int64_t get_int(const std::string& key, std::optional<std::int64_t> fallback = std::nullopt);
    std::string get_string(const std::string& key, std::optional<std::string> fallback = std::nullopt);
    std::vector<double> get_number_list(const std::string& key,
                                        std::optional<std::vector<double>> fallback = std::nullopt);
    std::vector<std::vector<double>> get_number_table(const std::string& key);

    void mark_consumed(const std::string& key);
    // Throws listing any key that no getter touched.
    void reject_unknown_keys() const;

    // Canonical echo of the effective configuration: every key a getter
    // resolved, including defaulted ones, sorted and sectioned.  Re-running
    // from the echo reproduces the run byte-identically.
    std::string echo() const;

private:
    void record(const std::string& key, const std::string& canonical);

    std::map<std::string, std::string> raw_;        // key -> JSON text (canonicalized)
    std::map<std::string, std::string> effective_;  // keys resolved during the run
    std::set<std::string> consumed_;
};

// Model-block builders shared by the CLI commands.

// Delay/level measure at `prefix` (e.g. "model.eta"): atoms = [[loc, w], ...],
// gamma = [[coef, shape, rate], ...], grid = [dt, "values.csv"] or
// grid = {"dt": ..., "values_file": "values.csv"}.  The CARMA and OU
// shorthands (model.carma = [a1, a2, b0], model.ou_lambda) construct eta when
// the explicit blocks are absent.
std::optional<SignedMeasure> measure_from_config(RunConfig& cfg, const std::string& prefix);
std::optional<SignedMeasure> eta_from_config(RunConfig& cfg);

// Kernel at `prefix`: steps = [h0, h1, ...] (unit-width staircase) or
// fractional_d = d (with model horizon) or csv = "kernel.csv".
std::optional<SampledKernel> kernel_from_config(RunConfig& cfg, const std::string& prefix,
                                                double dt, double horizon);

std::optional<closed_forms::ArmaSpec> arma_from_config(RunConfig& cfg);

sim::LevyDriver driver_from_config(RunConfig& cfg);

}  // namespace ctar::config
