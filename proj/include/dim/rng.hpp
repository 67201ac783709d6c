// Deterministic random sources.  Nothing in the library reads ambient time
// or global randomness: every operation that needs entropy takes an explicit
// seed and derives its stream from one of these two generators.
//
//  * HashDrbg  -- SHA-256 in counter mode; used for key material so that
//                 keypairs, challenges and envelope nonces are reproducible
//                 byte-for-byte from a seed.
//  * SimRng    -- splitmix64-seeded xoshiro256** with hand-rolled uniform and
//                 normal draws; used by the mobility and radio simulators.
//                 Distributions are implemented here (not via <random>) so
//                 results do not depend on the standard library version.
#pragma once

#include <cmath>
#include <cstdint>

#include "dim/bytes.hpp"

namespace dim {

class HashDrbg {
  public:
    explicit HashDrbg(uint64_t seed) : seed_(seed) {}

    // Next `n` bytes of the stream SHA256(be64(seed) || be64(0)) ||
    // SHA256(be64(seed) || be64(1)) || ...
    Bytes bytes(size_t n);

    uint64_t next_u64();

  private:
    uint64_t seed_;
    uint64_t counter_ = 0;
    Bytes buffer_;
    size_t used_ = 0;

    void refill();
};

inline uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class SimRng {
  public:
    explicit SimRng(uint64_t seed) {
        uint64_t sm = seed;
        for (auto& w : s_) w = splitmix64(sm);
    }

    uint64_t next_u64() {
        auto rotl = [](uint64_t x, int k) { return (x << k) | (x >> (64 - k)); };
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

    // Uniform in [0, 1) with 53-bit resolution.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform integer in [lo, hi] inclusive (unbiased rejection sampling).
    int64_t uniform_int(int64_t lo, int64_t hi) {
        uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
        if (span == 0) return static_cast<int64_t>(next_u64());  // full range
        uint64_t limit = UINT64_MAX - UINT64_MAX % span;
        uint64_t v;
        do {
            v = next_u64();
        } while (v >= limit);
        return lo + static_cast<int64_t>(v % span);
    }

    double uniform_range(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Box-Muller; caches the spare draw.
    double normal(double mean, double sd) {
        if (have_spare_) {
            have_spare_ = false;
            return mean + sd * spare_;
        }
        double u1, u2;
        do {
            u1 = uniform();
        } while (u1 <= 0.0);
        u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double theta = 2.0 * M_PI * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return mean + sd * r * std::cos(theta);
    }

  private:
    uint64_t s_[4];
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// Stable 64-bit mix for deriving per-object substreams (e.g. one shadowing
// draw per directed radio link) from a run seed.
inline uint64_t mix_seed(uint64_t a, uint64_t b, uint64_t c = 0) {
    uint64_t state = a;
    uint64_t h = splitmix64(state);
    state ^= b + 0x9e3779b97f4a7c15ULL;
    h ^= splitmix64(state);
    state ^= c + 0xc2b2ae3d27d4eb4fULL;
    h ^= splitmix64(state);
    return h;
}

}  // namespace dim
