#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "ctar/fft.hpp"

using cplx = std::complex<double>;

namespace {

// Quadratic-time reference transform.
std::vector<cplx> naive_dft(const std::vector<cplx>& x, bool inverse) {
    const auto n = x.size();
    std::vector<cplx> out(n);
    const double sign = inverse ? 1.0 : -1.0;
    for (std::size_t k = 0; k < n; ++k) {
        cplx s = 0;
        for (std::size_t j = 0; j < n; ++j)
            s += x[j] * std::polar(1.0, sign * 2.0 * std::numbers::pi *
                                            static_cast<double>(j * k % n) / static_cast<double>(n));
        out[k] = inverse ? s / static_cast<double>(n) : s;
    }
    return out;
}

std::vector<cplx> random_signal(std::size_t n, std::uint32_t seed) {
    std::mt19937 gen(seed);
    std::normal_distribution<double> dist;
    std::vector<cplx> v(n);
    for (auto& z : v) z = cplx(dist(gen), dist(gen));
    return v;
}

}  // namespace

TEST_CASE("matches the naive transform") {
    for (std::size_t n : {1u, 2u, 8u, 64u, 256u}) {
        auto x = random_signal(n, static_cast<std::uint32_t>(n));
        const auto want = naive_dft(x, false);
        auto got = x;
        ctar::fft::transform(got, false);
        for (std::size_t k = 0; k < n; ++k) CHECK(std::abs(got[k] - want[k]) < 1e-9);
    }
}

TEST_CASE("round trip is the identity") {
    auto x = random_signal(4096, 7);
    auto y = x;
    ctar::fft::transform(y, false);
    ctar::fft::transform(y, true);
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::abs(y[i] - x[i]) < 1e-12);
}

TEST_CASE("parseval") {
    auto x = random_signal(1024, 9);
    double time_energy = 0;
    for (const auto& z : x) time_energy += std::norm(z);
    auto y = x;
    ctar::fft::transform(y, false);
    double freq_energy = 0;
    for (const auto& z : y) freq_energy += std::norm(z);
    CHECK(freq_energy / static_cast<double>(x.size()) ==
          doctest::Approx(time_energy).epsilon(1e-12));
}

TEST_CASE("rejects non-power-of-two sizes") {
    std::vector<cplx> x(12);
    CHECK_THROWS_AS(ctar::fft::transform(x, false), std::invalid_argument);
}
