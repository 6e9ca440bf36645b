#include "ctar/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "ctar/io.hpp"

namespace ctar::config {

using nlohmann::json;

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

json parse_value(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error&) {
        return json(text);  // bare word -> string
    }
}

json get_raw(const std::map<std::string, std::string>& raw, const std::string& key) {
    const auto it = raw.find(key);
    if (it == raw.end()) throw std::runtime_error("missing config key: " + key);
    return json::parse(it->second);
}

}  // namespace

RunConfig RunConfig::from_text(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[' && line.back() == ']') {
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config line " + std::to_string(lineno) +
                                     ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        if (!section.empty()) key = section + "." + key;
        const json v = parse_value(trim(line.substr(eq + 1)));
        cfg.raw_[key] = v.dump();
    }
    return cfg;
}

RunConfig RunConfig::from_file(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot read config: " + file.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return from_text(ss.str());
}

void RunConfig::set_override(const std::string& key, const std::string& value) {
    raw_[key] = parse_value(trim(value)).dump();
}

bool RunConfig::has(const std::string& key) const { return raw_.count(key) != 0; }

void RunConfig::mark_consumed(const std::string& key) {
    consumed_.insert(key);
    const auto it = raw_.find(key);
    if (it != raw_.end()) effective_[key] = it->second;
}

void RunConfig::record(const std::string& key, const std::string& canonical) {
    consumed_.insert(key);
    effective_[key] = canonical;
}

double RunConfig::get_number(const std::string& key, std::optional<double> fallback) {
    if (!has(key)) {
        if (!fallback) throw std::runtime_error("missing config key: " + key);
        record(key, json(*fallback).dump());
        return *fallback;
    }
    const json v = get_raw(raw_, key);
    if (!v.is_number()) throw std::runtime_error("config key " + key + " must be a number");
    record(key, v.dump());
    return v.get<double>();
}

std::int64_t RunConfig::get_int(const std::string& key, std::optional<std::int64_t> fallback) {
    if (!has(key)) {
        if (!fallback) throw std::runtime_error("missing config key: " + key);
        record(key, json(*fallback).dump());
        return *fallback;
    }
    const json v = get_raw(raw_, key);
    if (!v.is_number_integer() && !v.is_number_unsigned())
        throw std::runtime_error("config key " + key + " must be an integer");
    record(key, v.dump());
    return v.get<std::int64_t>();
}

std::string RunConfig::get_string(const std::string& key, std::optional<std::string> fallback) {
    if (!has(key)) {
        if (!fallback) throw std::runtime_error("missing config key: " + key);
        record(key, json(*fallback).dump());
        return *fallback;
    }
    const json v = get_raw(raw_, key);
    record(key, v.dump());
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

std::vector<double> RunConfig::get_number_list(const std::string& key,
                                               std::optional<std::vector<double>> fallback) {
    if (!has(key)) {
        if (!fallback) throw std::runtime_error("missing config key: " + key);
        record(key, json(*fallback).dump());
        return *fallback;
    }
    record(key, get_raw(raw_, key).dump());
    const json v = get_raw(raw_, key);
    if (!v.is_array()) throw std::runtime_error("config key " + key + " must be an array");
    std::vector<double> out;
    for (const auto& e : v) {
        if (!e.is_number()) throw std::runtime_error("config key " + key + " must hold numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

std::vector<std::vector<double>> RunConfig::get_number_table(const std::string& key) {
    record(key, get_raw(raw_, key).dump());
    const json v = get_raw(raw_, key);
    if (!v.is_array()) throw std::runtime_error("config key " + key + " must be an array");
    std::vector<std::vector<double>> out;
    for (const auto& row : v) {
        if (!row.is_array()) throw std::runtime_error("config key " + key + " must hold arrays");
        std::vector<double> r;
        for (const auto& e : row) r.push_back(e.get<double>());
        out.push_back(std::move(r));
    }
    return out;
}

void RunConfig::reject_unknown_keys() const {
    for (const auto& [key, value] : raw_) {
        if (!consumed_.count(key))
            throw std::runtime_error("unknown config key: " + key);
    }
}

std::string RunConfig::echo() const {
    // Group by section (prefix up to the first dot), keys sorted within.
    std::map<std::string, std::map<std::string, std::string>> sections;
    for (const auto& [key, value] : effective_) {
        const auto dot = key.find('.');
        if (dot == std::string::npos)
            sections[""][key] = value;
        else
            sections[key.substr(0, dot)][key.substr(dot + 1)] = value;
    }
    std::string out;
    for (const auto& [sec, kv] : sections) {
        if (!sec.empty()) out += "[" + sec + "]\n";
        for (const auto& [k, v] : kv) out += k + " = " + v + "\n";
    }
    return out;
}

std::optional<SignedMeasure> measure_from_config(RunConfig& cfg, const std::string& prefix) {
    SignedMeasure mu;
    bool any = false;
    if (cfg.has(prefix + ".atoms")) {
        for (const auto& row : cfg.get_number_table(prefix + ".atoms")) {
            if (row.size() != 2)
                throw std::runtime_error(prefix + ".atoms rows must be [location, weight]");
            mu.atoms.push_back({row[0], row[1]});
        }
        any = true;
    }
    if (cfg.has(prefix + ".gamma")) {
        for (const auto& row : cfg.get_number_table(prefix + ".gamma")) {
            if (row.size() != 3)
                throw std::runtime_error(prefix + ".gamma rows must be [coef, shape, rate]");
            mu.gamma_terms.push_back({row[0], row[1], row[2]});
        }
        any = true;
    }
    if (cfg.has(prefix + ".grid")) {
        cfg.mark_consumed(prefix + ".grid");
        const json v = json::parse(cfg.get_string(prefix + ".grid"));
        GridDensity gd;
        if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_string()) {
            gd.dt = v[0].get<double>();
            gd.values = io::read_value_column(v[1].get<std::string>());
        } else if (v.is_object() && v.contains("dt") && v.contains("values_file")) {
            gd.dt = v.at("dt").get<double>();
            gd.values = io::read_value_column(v.at("values_file").get<std::string>());
        } else {
            throw std::runtime_error(prefix +
                                     ".grid must be [dt, \"values.csv\"] or "
                                     "{\"dt\": ..., \"values_file\": \"values.csv\"}");
        }
        mu.grid_density = std::move(gd);
        any = true;
    }
    if (!any) return std::nullopt;
    return mu;
}

std::optional<SignedMeasure> eta_from_config(RunConfig& cfg) {
    if (auto mu = measure_from_config(cfg, "model.eta")) return mu;
    if (cfg.has("model.carma")) {
        const auto v = cfg.get_number_list("model.carma");
        if (v.size() != 3) throw std::runtime_error("model.carma must be [a1, a2, b0]");
        return closed_forms::carma_delay_measure({v[0], v[1], v[2]});
    }
    if (cfg.has("model.ou_lambda")) {
        const double lam = cfg.get_number("model.ou_lambda");
        return SignedMeasure::dirac(0.0, -lam);
    }
    return std::nullopt;
}

std::optional<SampledKernel> kernel_from_config(RunConfig& cfg, const std::string& prefix,
                                                double dt, double horizon) {
    if (cfg.has(prefix + ".steps")) {
        const auto heights = cfg.get_number_list(prefix + ".steps");
        return closed_forms::staircase_kernel(heights, dt);
    }
    if (cfg.has(prefix + ".fractional_d")) {
        const double d = cfg.get_number(prefix + ".fractional_d");
        return closed_forms::fractional_theta(d, dt, horizon);
    }
    if (cfg.has(prefix + ".csv")) {
        return io::read_kernel_csv(cfg.get_string(prefix + ".csv"));
    }
    return std::nullopt;
}

std::optional<closed_forms::ArmaSpec> arma_from_config(RunConfig& cfg) {
    if (!cfg.has("model.arma_phi") && !cfg.has("model.arma_theta")) return std::nullopt;
    closed_forms::ArmaSpec spec;
    spec.phi = cfg.get_number_list("model.arma_phi", std::vector<double>{});
    spec.theta = cfg.get_number_list("model.arma_theta", std::vector<double>{});
    return spec;
}

sim::LevyDriver driver_from_config(RunConfig& cfg) {
    sim::LevyDriver d;
    d.gaussian_var = cfg.get_number("driver.sigma2", 1.0);
    const std::string law = cfg.get_string("driver.jump_law", std::string("none"));
    if (law == "none") {
        d.jumps.law = sim::JumpPart::Law::none;
    } else if (law == "normal") {
        d.jumps.law = sim::JumpPart::Law::centered_normal;
    } else if (law == "two_point") {
        d.jumps.law = sim::JumpPart::Law::two_point;
    } else {
        throw std::runtime_error("driver.jump_law must be none, normal or two_point");
    }
    if (d.jumps.law != sim::JumpPart::Law::none) {
        d.jumps.rate = cfg.get_number("driver.jump_rate");
        d.jumps.param = cfg.get_number("driver.jump_param");
    }
    return d;
}

}  // namespace ctar::config
