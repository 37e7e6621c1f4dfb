#pragma once

#include <cstdint>

namespace nnlsm {

/// SplitMix64 finalizer; used to derive independent stream seeds.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Seed for substream `stream` of a base seed. Pure function of its inputs, so
/// path m of an experiment is reproducible regardless of how paths are scheduled.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) noexcept;

/// Inverse of the standard normal CDF (Acklam's rational approximation plus one
/// Halley refinement step; relative error near machine precision).
double inverse_normal_cdf(double p);

double normal_cdf(double x) noexcept;

/// xoshiro256** generator, seeded from a single 64-bit value via SplitMix64.
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed) noexcept;

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return ~result_type{0}; }

    result_type operator()() noexcept;

    /// Uniform on the open interval (0, 1).
    double uniform() noexcept;

    /// Standard normal draw by inversion.
    double normal() { return inverse_normal_cdf(uniform()); }

private:
    std::uint64_t s_[4];
};

}  // namespace nnlsm
