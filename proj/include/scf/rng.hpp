#ifndef SCF_RNG_HPP
#define SCF_RNG_HPP

#include <cstdint>

namespace scf {

// xoshiro256** seeded through splitmix64. Self-contained so that seeded runs
// are bit-identical across standard libraries (std::uniform_int_distribution
// is implementation-defined and would break reproducibility).
class Rng {
public:
    explicit Rng(uint64_t seed) {
        uint64_t x = seed;
        for (auto& word : s_) word = splitmix64(x);
    }

    uint64_t next_u64() {
        const uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform in [0, 1), 53-bit resolution.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in [0, bound), debiased by rejection.
    uint64_t next_below(uint64_t bound) {
        const uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        uint64_t x;
        do {
            x = next_u64();
        } while (x >= limit);
        return x % bound;
    }

    int next_int(int bound) { return static_cast<int>(next_below(static_cast<uint64_t>(bound))); }

    bool next_bool(double p) { return next_double() < p; }

    static uint64_t splitmix64(uint64_t& state) {
        uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    uint64_t s_[4];
};

// Derives an independent stream id from a base seed and indices, for
// per-repeat / per-cell RNGs that must not depend on execution order.
inline uint64_t mix_seed(uint64_t seed, uint64_t a, uint64_t b = 0) {
    uint64_t x = seed;
    Rng::splitmix64(x);
    x ^= 0x632be59bd9b4e019ULL + a;
    Rng::splitmix64(x);
    x ^= 0x9e6c63d0876a9f77ULL + b;
    return Rng::splitmix64(x);
}

}  // namespace scf

#endif
