#pragma once

#include <cstdint>
#include <cmath>

namespace scengen {

// splitmix64, used for seed derivation and counter-based draws so that
// traces replay identically regardless of how many streams a run opens.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t hash_combine(std::uint64_t a, std::uint64_t b) {
    return splitmix64(a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2)));
}

/// Small deterministic generator (xoshiro-free: repeated splitmix64 walks).
/// All distributions are implemented explicitly so results are identical
/// across standard libraries and platforms.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : state_(splitmix64(seed ^ 0x5DEECE66DULL)) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0,1).
    double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in [lo,hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n).
    std::uint64_t uniform_int(std::uint64_t n) {
        // Lemire-style rejection-free enough for simulation purposes;
        // modulo bias is negligible for n << 2^64 but we reject anyway.
        if (n == 0) return 0;
        std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            std::uint64_t r = next_u64();
            if (r >= threshold) return r % n;
        }
    }

    std::uint64_t state() const { return state_; }

private:
    std::uint64_t state_;
};

/// Stateless uniform in [0,1) from a key tuple. Used for perception keep/drop
/// draws so that milder degradation levels perceive a superset of actors.
inline double keyed_uniform(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    return double(splitmix64(hash_combine(hash_combine(seed, a), b)) >> 11) * 0x1.0p-53;
}

}  // namespace scengen
