// Counter-keyed random streams.
//
// Every randomized experiment derives its generator from a tuple of keys
// (seed, replication, draw, ...) so results do not depend on the order in
// which replications are scheduled.
#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>

namespace barron {

namespace detail {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace detail

/// Folds a list of keys into a single 64-bit stream key.
constexpr std::uint64_t derive_key(std::initializer_list<std::uint64_t> keys) noexcept {
    std::uint64_t h = 0x6a09e667f3bcc909ULL;
    for (auto k : keys) h = detail::splitmix64(h ^ detail::splitmix64(k));
    return h;
}

/// SplitMix64 stream over a fixed key; satisfies UniformRandomBitGenerator
/// so it plugs into the <random> distributions.
class StreamRng {
public:
    using result_type = std::uint64_t;

    explicit constexpr StreamRng(std::uint64_t key) noexcept : state_(key) {}
    constexpr StreamRng(std::initializer_list<std::uint64_t> keys) noexcept
        : state_(derive_key(keys)) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept {
        return std::numeric_limits<result_type>::max();
    }

    constexpr result_type operator()() noexcept {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1) from the top 53 bits.
    constexpr double uniform() noexcept {
        return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
    }

private:
    std::uint64_t state_;
};

}  // namespace barron
