#pragma once

// Deterministic PRNG for reproducible workloads: xoshiro256** seeded via
// SplitMix64. The exact draw-to-value mappings below are part of the file
// format contract; reference vectors live in the test suite.

#include <cmath>
#include <cstdint>

namespace cesim {

struct SplitMix64 {
    uint64_t state;

    explicit SplitMix64(uint64_t seed) : state(seed) {}

    uint64_t next() {
        state += 0x9E3779B97F4A7C15ull;
        uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
};

class Xoshiro256StarStar {
  public:
    explicit Xoshiro256StarStar(uint64_t seed) {
        SplitMix64 sm(seed);
        for (auto& w : s_) w = sm.next();
    }

    uint64_t next_u64() {
        uint64_t result = rotl(s_[1] * 5, 7) * 9;
        uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // 53-bit mantissa in [0, 1)
    double u01() { return double(next_u64() >> 11) * 0x1.0p-53; }

    // inclusive range, floor mapping clamped at hi
    long long uniform_int(long long lo, long long hi) {
        long long v = lo + (long long)(u01() * double(hi - lo + 1));
        return v < hi ? v : hi;
    }

    double uniform_real(double lo, double hi) { return lo + u01() * (hi - lo); }

    // Knuth multiplication method; fine at the rates used here
    long long poisson(double lambda) {
        if (lambda <= 0.0) return 0;
        double limit = std::exp(-lambda);
        long long k = 0;
        double p = 1.0;
        do {
            ++k;
            p *= u01();
        } while (p > limit);
        return k - 1;
    }

  private:
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    uint64_t s_[4];
};

// Stable derivation of per-trial seeds from a base seed.
inline uint64_t mix_seed(uint64_t seed, uint64_t a, uint64_t b = 0) {
    uint64_t v = SplitMix64(seed ^ (a * 0x9E3779B97F4A7C15ull)).next();
    return SplitMix64(v ^ (b * 0xBF58476D1CE4E5B9ull)).next();
}

}  // namespace cesim
