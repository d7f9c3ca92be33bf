#include "perco/rng.hpp"

#include <numeric>
#include <utility>

#include "perco/errors.hpp"

namespace perco {

namespace {

std::mt19937_64 seeded_engine(std::uint64_t seed, std::uint64_t stream_id) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream_id),
                      static_cast<std::uint32_t>(stream_id >> 32)};
    return std::mt19937_64(seq);
}

} // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id), engine_(seeded_engine(seed, stream_id)) {}

// Rejects the low (2^64 mod bound) values so every residue is equally likely.
std::uint64_t RngStream::uniform_below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    std::uint64_t x = engine_();
    while (x < threshold)
        x = engine_();
    return x % bound;
}

std::vector<SiteIndex> random_permutation(std::size_t n, RngStream& rng) {
    if (n == 0)
        throw InvalidArgument("permutation length must be positive");
    std::vector<SiteIndex> order(n);
    std::iota(order.begin(), order.end(), SiteIndex{0});
    for (std::size_t i = n - 1; i > 0; --i) {
        const auto j = static_cast<std::size_t>(rng.uniform_below(i + 1));
        std::swap(order[i], order[j]);
    }
    return order;
}

} // namespace perco
