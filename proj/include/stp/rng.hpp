#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace stp {

/// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Seed of trajectory `index` within a batch started from `base_seed`.
constexpr std::uint64_t trajectory_seed(std::uint64_t base_seed, std::uint64_t index) noexcept {
    return base_seed ^ mix64(index + 0x9e3779b97f4a7c15ULL);
}

/// Counter-based generator: the n-th draw is a pure function of (seed, n).
///
/// Satisfies UniformRandomBitGenerator, so it plugs into the <random>
/// distributions. Gaussian draws go through a std::normal_distribution owned
/// by the generator; its cached second variate is part of the state.
class SeededRng {
public:
    using result_type = std::uint64_t;

    explicit SeededRng(std::uint64_t seed = 0) noexcept : seed_(seed) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept {
        return std::numeric_limits<result_type>::max();
    }

    result_type operator()() noexcept {
        ++counter_;
        return mix64(seed_ + counter_ * 0x9e3779b97f4a7c15ULL);
    }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept {
        return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
    }

    double normal() { return normal_(*this); }

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t draws() const noexcept { return counter_; }

private:
    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace stp
