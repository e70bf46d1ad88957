#pragma once

#include <cstdint>
#include <limits>

namespace rgtest {

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Seed for stream `index` under `seed`. Distinct (seed, index) pairs give
/// statistically unrelated seeds; used to split per-trial and per-permutation
/// streams so results never depend on scheduling.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept {
    return mix64(mix64(seed + 0x9e3779b97f4a7c15ULL) ^ mix64(index + 0x632be59bd9b4e019ULL));
}

/// Counter-based generator: output n is mix64(key + n * golden). Satisfies
/// UniformRandomBitGenerator, so it plugs into <random> distributions.
class CounterEngine {
public:
    using result_type = std::uint64_t;

    explicit CounterEngine(std::uint64_t seed, std::uint64_t stream = 0) noexcept
        : key_(derive_seed(seed, stream)) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept {
        counter_ += 0x9e3779b97f4a7c15ULL;
        return mix64(key_ + counter_);
    }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace rgtest
