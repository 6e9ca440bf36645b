#pragma once

#include <array>
#include <cstdint>

// Philox4x32-10 counter-based generator.  Every draw is a pure function of
// (seed, stream, step, draw index), so replicate streams are reproducible and
// independent of scheduling order.  Stream layout:
//   key     = (seed lo32, seed hi32)
//   counter = (step lo32, step hi32, draw, stream)
// Known-answer vectors are pinned in tests/test_simulation.cpp.

namespace ctar::rng {

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

class CounterStream {
public:
    CounterStream(std::uint64_t seed, std::uint32_t stream) : seed_(seed), stream_(stream) {}

    // Uniform on (0, 1), the k-th draw of the given step.
    double uniform(std::uint64_t step, std::uint32_t k) const;

    // Standard normal, the k-th draw of the given step (Box-Muller, one
    // block per draw; draw spaces of normals and uniforms are disjoint).
    double normal(std::uint64_t step, std::uint32_t k) const;

    // Poisson count by Knuth's product method; consumes a variable number of
    // uniforms from a dedicated draw space of the step.
    int poisson(double mean, std::uint64_t step) const;

    std::uint64_t seed() const { return seed_; }
    std::uint32_t stream() const { return stream_; }

private:
    std::array<std::uint32_t, 4> block(std::uint64_t step, std::uint32_t draw) const;

    std::uint64_t seed_;
    std::uint32_t stream_;
};

}  // namespace ctar::rng
