#include "ctar/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ctar::io {

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

namespace {

std::ofstream open_out(const std::filesystem::path& file) {
    std::ofstream out(file);
    if (!out) throw std::runtime_error("cannot write " + file.string());
    return out;
}

std::ifstream open_in(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot read " + file.string());
    return in;
}

}  // namespace

void write_kernel_csv(const std::filesystem::path& file, const SampledKernel& k) {
    auto out = open_out(file);
    if (k.atom_at_zero != 0.0) out << "# atom_at_zero = " << g17(k.atom_at_zero) << "\n";
    out << "t,value\n";
    for (std::size_t i = 0; i < k.values.size(); ++i)
        out << g17(k.time_at(static_cast<std::int64_t>(i))) << "," << g17(k.values[i]) << "\n";
}

SampledKernel read_kernel_csv(const std::filesystem::path& file) {
    auto in = open_in(file);
    SampledKernel k;
    std::string line;
    std::vector<double> times;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto pos = line.find("atom_at_zero =");
            if (pos != std::string::npos) k.atom_at_zero = std::stod(line.substr(pos + 14));
            continue;
        }
        if (line.rfind("t,", 0) == 0) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw std::runtime_error("malformed kernel csv");
        times.push_back(std::stod(line.substr(0, comma)));
        k.values.push_back(std::stod(line.substr(comma + 1)));
    }
    if (times.size() < 2) throw std::runtime_error("kernel csv needs at least two samples");
    k.t0 = times.front();
    k.dt = times[1] - times[0];
    return k;
}

void write_path_csv(const std::filesystem::path& file, const sim::PathSample& p,
                    const std::string& config_hash, double burn_in) {
    auto out = open_out(file);
    out << "# seed = " << p.seed << "\n";
    out << "# stream = " << p.stream << "\n";
    out << "# config_hash = " << config_hash << "\n";
    out << "# driver = " << p.driver_desc << "\n";
    out << "# dt = " << g17(p.dt) << "\n";
    out << "# burn_in = " << g17(burn_in) << "\n";
    out << "t,value\n";
    for (std::size_t i = 0; i < p.values.size(); ++i)
        out << g17(p.time_at(i)) << "," << g17(p.values[i]) << "\n";
}

sim::PathSample read_path_csv(const std::filesystem::path& file) {
    auto in = open_in(file);
    sim::PathSample p;
    std::string line;
    std::vector<double> times;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (line.rfind("t,", 0) == 0) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw std::runtime_error("malformed path csv");
        times.push_back(std::stod(line.substr(0, comma)));
        p.values.push_back(std::stod(line.substr(comma + 1)));
    }
    if (times.size() < 2) throw std::runtime_error("path csv needs at least two samples");
    p.t_start = times.front();
    p.dt = times[1] - times[0];
    return p;
}

void write_acf_csv(const std::filesystem::path& file, const stats::AcfCurve& curve) {
    auto out = open_out(file);
    out << "lag,value\n";
    for (std::size_t i = 0; i < curve.lags.size(); ++i)
        out << g17(curve.lags[i]) << "," << g17(curve.values[i]) << "\n";
}

void write_text_file(const std::filesystem::path& file, const std::string& text) {
    auto out = open_out(file);
    out << text;
}

std::vector<double> read_value_column(const std::filesystem::path& file) {
    auto in = open_in(file);
    std::vector<double> vals;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        vals.push_back(std::stod(line));
    }
    return vals;
}

}  // namespace ctar::io
