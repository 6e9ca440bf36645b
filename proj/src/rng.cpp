#include "ctar/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ctar::rng {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void round_once(std::array<std::uint32_t, 4>& c, const std::array<std::uint32_t, 2>& k) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * c[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * c[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

inline double to_unit_interval(std::uint32_t hi, std::uint32_t lo) {
    const std::uint64_t x = (static_cast<std::uint64_t>(hi) << 32) | lo;
    // 53-bit mantissa, offset half an ulp into the open interval.
    return static_cast<double>(x >> 11) * 0x1.0p-53 + 0x1.0p-54;
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key) {
    for (int r = 0; r < 10; ++r) {
        if (r > 0) {
            key[0] += kWeyl0;
            key[1] += kWeyl1;
        }
        round_once(counter, key);
    }
    return counter;
}

std::array<std::uint32_t, 4> CounterStream::block(std::uint64_t step, std::uint32_t draw) const {
    const std::array<std::uint32_t, 4> ctr = {static_cast<std::uint32_t>(step),
                                              static_cast<std::uint32_t>(step >> 32), draw,
                                              stream_};
    const std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(seed_),
                                              static_cast<std::uint32_t>(seed_ >> 32)};
    return philox4x32(ctr, key);
}

double CounterStream::uniform(std::uint64_t step, std::uint32_t k) const {
    const auto w = block(step, 0x80000000u | k);
    return to_unit_interval(w[0], w[1]);
}

double CounterStream::normal(std::uint64_t step, std::uint32_t k) const {
    const auto w = block(step, k);
    const double u1 = to_unit_interval(w[0], w[1]);
    const double u2 = to_unit_interval(w[2], w[3]);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

int CounterStream::poisson(double mean, std::uint64_t step) const {
    if (mean < 0.0) throw std::invalid_argument("poisson mean must be >= 0");
    if (mean == 0.0) return 0;
    if (mean > 64.0) throw std::invalid_argument("poisson mean too large for product method");
    const double target = std::exp(-mean);
    double prod = 1.0;
    int count = -1;
    std::uint32_t draw = 0x40000000u;
    std::uint32_t word = 0;
    std::array<std::uint32_t, 4> w{};
    while (true) {
        if (word == 0) w = block(step, draw++);
        const double u = word == 0 ? to_unit_interval(w[0], w[1]) : to_unit_interval(w[2], w[3]);
        word ^= 1u;
        prod *= u;
        ++count;
        if (prod <= target) return count;
    }
}

}  // namespace ctar::rng
