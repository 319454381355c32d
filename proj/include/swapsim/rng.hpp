#pragma once

/**
 * Deterministic random number generation.
 *
 * Every stochastic component of the toolkit draws from an Rng constructed
 * from a single 64-bit scenario seed.  Components that need independent
 * randomness derive a labelled sub-stream with derive("label"); the
 * derivation depends only on (seed, label), never on draw order, so adding
 * a consumer in one module cannot perturb the stream seen by another.
 *
 * The core engine is std::mt19937_64, whose integer output sequence is
 * fully specified by the C++ standard and therefore identical on every
 * conforming implementation.  uniform() maps the top 53 bits to [0, 1) with
 * exact binary arithmetic.  gaussian() uses the Marsaglia polar transform,
 * which touches libm only through sqrt (IEEE-exact) and log (faithfully
 * rounded on mainstream libms).
 */

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace swapsim {

/// FNV-1a 64-bit hash; used to fold sub-stream labels into the seed.
inline constexpr std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 1469598103934665603ull;
    for (char c : s) {
        h ^= static_cast<std::uint8_t>(c);
        h *= 1099511628211ull;
    }
    return h;
}

/// One round of the splitmix64 mixer; scrambles label hashes so that
/// similar labels yield unrelated seeds.
inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    /// Seed this stream was constructed with (root seed or derived sub-seed).
    std::uint64_t seed() const { return seed_; }

    /// Independent sub-stream identified by (seed, label) only.
    Rng derive(std::string_view label) const {
        return Rng(splitmix64(seed_ ^ fnv1a64(label)));
    }

    /// Numbered variant for per-worker / per-sample streams.
    Rng derive(std::string_view label, std::uint64_t index) const {
        return Rng(splitmix64(splitmix64(seed_ ^ fnv1a64(label)) + index));
    }

    /// Raw 64 uniformly random bits.
    std::uint64_t next_u64() { return engine_(); }

    /// Uniform double in [0, 1) with 53-bit resolution.
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n).
    std::uint64_t uniform_index(std::uint64_t n) {
        // Rejection sampling to avoid modulo bias.
        const std::uint64_t limit = n * ((~0ull) / n);
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % n;
    }

    bool bernoulli(double p) { return uniform() < p; }

    /// Standard normal draw (Marsaglia polar method, pair-cached).
    double gaussian() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double m = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * m;
        has_spare_ = true;
        return u * m;
    }

    double gaussian(double mean, double sd) { return mean + sd * gaussian(); }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace swapsim
