#pragma once

#include <cstdint>

namespace erps {

/// SplitMix64 finaliser.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Counter-based stream: the draws for (seed, stream, index) depend on
/// nothing else, so partitioning work across threads cannot change results.
class CounterRng {
public:
    constexpr CounterRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) noexcept
        : key_(mix64(mix64(seed) ^ mix64(stream + 0x632be59bd9b4e019ULL) ^ mix64(~index))), counter_(0) {}

    constexpr std::uint64_t next_u64() noexcept { return mix64(key_ + 0x9e3779b97f4a7c15ULL * ++counter_); }

    /// Uniform on [0, 1) with 53 random bits.
    constexpr double uniform() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform on (0, 1].
    constexpr double uniform_open_low() noexcept { return 1.0 - uniform(); }

private:
    std::uint64_t key_;
    std::uint64_t counter_;
};

/// Stream identifiers, so different consumers of one seed never collide.
enum class RngStream : std::uint64_t {
    ensemble = 1,
    trajectories = 2,
    readout = 3,
    random_states = 4,
};

}  // namespace erps
