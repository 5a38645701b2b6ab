#pragma once

#include <cmath>
#include <cstdint>

namespace blinkid {

// splitmix64; used for seed derivation so parallel streams are reproducible
// regardless of scheduling.
inline uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline uint64_t derive_seed(uint64_t master, uint64_t stream) {
    uint64_t s = master ^ (0x632be59bd9b4e019ULL * (stream + 1));
    uint64_t a = splitmix64(s);
    uint64_t b = splitmix64(s);
    return a ^ (b << 1);
}

// xoshiro256** with fully specified sampling helpers, so results depend only
// on the seed, not on the standard library's distribution internals.
class Rng {
public:
    explicit Rng(uint64_t seed) {
        uint64_t sm = seed;
        for (auto& w : s_) w = splitmix64(sm);
    }

    uint64_t u64() {
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

    // Uniform in [0, 1).
    double uniform() { return double(u64() >> 11) * 0x1.0p-53; }

    // Uniform in (0, 1]; safe as a log() argument.
    double uniform_pos() { return double((u64() >> 11) + 1) * 0x1.0p-53; }

    // Uniform integer in [0, n); n >= 1.
    uint64_t below(uint64_t n) {
        uint64_t threshold = (0 - n) % n;
        for (;;) {
            uint64_t r = u64();
            if (r >= threshold) return r % n;
        }
    }

    double normal(double mu, double sd) {
        // Box-Muller, cosine branch only: two words per draw, no state.
        double u1 = uniform_pos();
        double u2 = uniform();
        return mu + sd * std::sqrt(-2.0 * std::log(u1)) *
                        std::cos(6.283185307179586476925286766559 * u2);
    }

    double laplace(double mu, double b) {
        double u = uniform() - 0.5;
        double s = u < 0 ? -1.0 : 1.0;
        return mu - b * s * std::log(1.0 - 2.0 * std::fabs(u));
    }

    bool bernoulli(double p) { return uniform() < p; }

private:
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    uint64_t s_[4];
};

} // namespace blinkid
