#pragma once

#include <cmath>
#include <cstdint>

namespace padam {

namespace detail {

// SplitMix64 finalizer. Bijective on 64-bit words; the quality of the whole
// generator rests on this mix.
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

}  // namespace detail

// Combine a seed with a stream tag into a new seed. Used to derive
// independent substreams (gradient noise, output-rule draw, ...).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
    return detail::mix64(seed + detail::kGolden * (tag + 1));
}

// Counter-based deterministic generator: sample k is mix64(seed + k*golden),
// i.e. SplitMix64 evaluated at an explicit counter. Identical seed gives a
// bit-identical sequence on every platform, independent of scheduling, and
// substreams derived from distinct tags never share state.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64() {
        return detail::mix64(seed_ + detail::kGolden * ++counter_);
    }

    // Uniform in [0, 1) with 53 random bits; exact integer-to-double, so the
    // value is platform-independent.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * next_double();
    }

    bool bernoulli(double prob) { return next_double() < prob; }

    // Box-Muller; consumes exactly two uniforms per call.
    double normal(double mean = 0.0, double stddev = 1.0) {
        double u1 = next_double();
        double u2 = next_double();
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 6.283185307179586476925286766559 * u2;
        return mean + stddev * r * std::cos(theta);
    }

    // Integer in [0, n).
    std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

    SeededRng substream(std::uint64_t tag) const {
        return SeededRng(derive_seed(seed_, tag));
    }

private:
    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
};

}  // namespace padam
