#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "perco/lattice.hpp"

namespace perco {

/// Reproducible random stream identified by (seed, stream_id).
///
/// The engine is std::mt19937_64 seeded through std::seed_seq with the four
/// 32-bit halves of seed and stream_id. Both algorithms are fixed by the C++
/// standard, and integer/real draws below avoid the implementation-defined
/// std distributions, so a (seed, stream_id) pair yields the same draws on
/// every conforming toolchain. Monte Carlo runs use stream_id = run index.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id);

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream_id() const noexcept { return stream_id_; }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform integer in [0, bound). bound must be nonzero.
    std::uint64_t uniform_below(std::uint64_t bound);

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// True with probability p; p = 0 never and p = 1 always fires.
    bool bernoulli(double p) { return uniform01() < p; }

private:
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::mt19937_64 engine_;
};

/// Uniform random ordering of {0, ..., n-1} by Fisher-Yates.
/// Throws InvalidArgument when n == 0.
std::vector<SiteIndex> random_permutation(std::size_t n, RngStream& rng);

} // namespace perco
