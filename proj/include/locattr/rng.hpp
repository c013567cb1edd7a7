#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace locattr {

/// SplitMix64: a counter-based generator (the state is a Weyl counter, each
/// output is a bijective mix of the counter). Every draw in the library goes
/// through this type so seeded results are bit-identical across platforms and
/// standard libraries. Distributions are implemented here for the same reason:
/// std::normal_distribution and friends are implementation-defined.
class SplitMix64 {
public:
    static constexpr std::uint64_t golden_gamma = 0x9e3779b97f4a7c15ULL;

    explicit constexpr SplitMix64(std::uint64_t seed = 0) noexcept : state_(seed) {}

    static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    constexpr std::uint64_t next() noexcept {
        state_ += golden_gamma;
        return mix(state_);
    }

    /// Uniform on [0, 1) with 53 bits of resolution.
    constexpr double uniform() noexcept {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [0, n). Rejection sampling, no modulo bias.
    constexpr std::uint64_t below(std::uint64_t n) noexcept {
        if (n <= 1) return 0;
        const std::uint64_t limit = (~std::uint64_t{0}) - ((~std::uint64_t{0}) % n);
        std::uint64_t r = next();
        while (r >= limit) r = next();
        return r % n;
    }

    bool bernoulli(double p) noexcept { return uniform() < p; }

    /// Standard normal via Box-Muller; the second variate is discarded so the
    /// stream position depends only on the number of calls.
    double normal() noexcept {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    constexpr std::uint64_t state() const noexcept { return state_; }

private:
    std::uint64_t state_;
};

/// Independent child seed for (stream, index) under a master seed. Used for
/// per-trial and per-t streams so parallel schedules cannot change results.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                                    std::uint64_t index = 0) noexcept {
    std::uint64_t z = SplitMix64::mix(master + SplitMix64::golden_gamma * (stream + 1));
    return SplitMix64::mix(z ^ (index * 0xd1b54a32d192ed03ULL + 0x8cb92ba72f3d8dd7ULL));
}

} // namespace locattr
