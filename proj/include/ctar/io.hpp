#pragma once

#include <cstdint>
#include <filesystem>
#include <string_view>
#include <string>
#include <vector>

#include "ctar/sampled_kernel.hpp"
#include "ctar/simulation.hpp"
#include "ctar/stats.hpp"

namespace ctar::io {

// Canonical float formatting for golden-stable artifacts.
std::string g17(double v);

std::uint64_t fnv1a(std::string_view s);

// Kernel CSV: optional "# atom_at_zero = w" comment, header "t,value".
void write_kernel_csv(const std::filesystem::path& file, const SampledKernel& k);
SampledKernel read_kernel_csv(const std::filesystem::path& file);

// Path CSV with a commented provenance header.
void write_path_csv(const std::filesystem::path& file, const sim::PathSample& p,
                    const std::string& config_hash, double burn_in);
sim::PathSample read_path_csv(const std::filesystem::path& file);

// ACF CSV: header "lag,value".
void write_acf_csv(const std::filesystem::path& file, const stats::AcfCurve& curve);

void write_text_file(const std::filesystem::path& file, const std::string& text);

// One real per line.
std::vector<double> read_value_column(const std::filesystem::path& file);

}  // namespace ctar::io
