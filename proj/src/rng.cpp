#include "spiked/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "spiked/errors.hpp"

namespace spiked {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) noexcept {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    std::uint64_t s = seed;
    const std::uint64_t a = splitmix64(s);
    s ^= stream * 0xd1b54a32d192ed03ULL;
    const std::uint64_t b = splitmix64(s);
    s ^= index * 0x8cb92ba72f3d8dd7ULL;
    const std::uint64_t c = splitmix64(s);
    const std::uint64_t d = splitmix64(s);
    std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                      static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32),
                      static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(c >> 32),
                      static_cast<std::uint32_t>(d), static_cast<std::uint32_t>(d >> 32)};
    return std::mt19937_64(seq);
}

}  // namespace

std::uint64_t hash_tag(std::string_view tag) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : tag) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index)
    : seed_(seed), engine_(make_engine(seed, stream, index)) {}

double Rng::uniform() {
    // 53 random bits, shifted off zero
    const std::uint64_t bits = engine_() >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double Rng::normal() { return normal_(engine_); }

double sample_gamma(double shape, double scale, Rng& rng) {
    if (!(shape > 0.0) || !(scale > 0.0) || !std::isfinite(shape) || !std::isfinite(scale)) {
        std::ostringstream os;
        os << "sample_gamma: shape and scale must be positive and finite (shape=" << shape
           << ", scale=" << scale << ")";
        throw InputError(os.str());
    }
    if (shape < 1.0) {
        const double g = sample_gamma(shape + 1.0, 1.0, rng);
        const double v = std::exp(std::log(g) + std::log(rng.uniform()) / shape);
        return std::max(v, std::numeric_limits<double>::denorm_min()) * scale;
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = rng.normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = rng.uniform();
        const double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) return d * v * scale;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v * scale;
    }
}

double sample_chi(double k, Rng& rng) { return std::sqrt(sample_gamma(0.5 * k, 2.0, rng)); }

}  // namespace spiked
