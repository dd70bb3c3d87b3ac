#pragma once

#include <cstdint>
#include <limits>

namespace symabs {

/// Counter-based generator: output i of stream s under seed k is a pure
/// function of (k, s, i), so any trial can be replayed on its own.
class CounterRng {
public:
    using result_type = std::uint64_t;

    CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept;

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept;

    /// Uniform on [0, 1) with 53 random bits.
    double uniform01() noexcept;
    /// Uniform on [lo, hi).
    double uniform(double lo, double hi) noexcept;

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t z) noexcept;

}  // namespace symabs
