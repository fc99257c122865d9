#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace spiked {

/// 64-bit FNV-1a, used to turn construction tags into stream identifiers.
std::uint64_t hash_tag(std::string_view tag) noexcept;

/// A random stream keyed by (seed, stream, index). Streams with distinct keys are
/// seeded independently, so a Monte Carlo run that draws sample i from key (seed, s, i)
/// gives the same output however the samples are scheduled across threads.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0, std::uint64_t index = 0);

    std::uint64_t seed() const noexcept { return seed_; }

    /// Uniform on the open interval (0, 1).
    double uniform();
    double normal();

    std::mt19937_64& engine() noexcept { return engine_; }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Gamma variate with density proportional to x^{shape-1} exp(-x/scale).
/// Marsaglia-Tsang for shape >= 1; shape < 1 uses Gamma(shape+1) * U^{1/shape}.
double sample_gamma(double shape, double scale, Rng& rng);

/// Chi variate with k degrees of freedom (k > 0, not necessarily integral): sqrt(Gamma(k/2, 2)).
double sample_chi(double k, Rng& rng);

}  // namespace spiked
