#pragma once

#include <cstdint>
#include <string_view>

namespace vckit {

// splitmix64: used to expand one 64-bit seed into generator state.
inline uint64_t splitmix64(uint64_t &state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// FNV-1a over a stage name; combined with the run seed it yields the
// per-stage sub-seed, so stages stay isolated under one --seed.
inline uint64_t fnv1a64(std::string_view s) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline uint64_t stage_seed(uint64_t seed, std::string_view stage) {
    uint64_t s = seed ^ fnv1a64(stage);
    return splitmix64(s);
}

inline uint64_t stage_seed(uint64_t seed, std::string_view stage, uint64_t index) {
    uint64_t s = seed ^ fnv1a64(stage) ^ (0x9e3779b97f4a7c15ULL * (index + 1));
    return splitmix64(s);
}

// PCG32 (pcg_basic's pcg32_random_r): portable, seedable, 32-bit output.
// All randomness in the library flows through this generator so results
// are bit-identical across platforms.
class Pcg32 {
  public:
    explicit Pcg32(uint64_t seed, uint64_t stream = 0x14057b7ef767814fULL) {
        uint64_t sm = seed;
        state_ = 0;
        inc_ = (splitmix64(sm) << 1u) | 1u;
        (void)stream;
        next_u32();
        state_ += splitmix64(sm);
        next_u32();
    }

    uint32_t next_u32() {
        uint64_t old = state_;
        state_ = old * 6364136223846793005ULL + inc_;
        uint32_t xorshifted = static_cast<uint32_t>(((old >> 18u) ^ old) >> 27u);
        uint32_t rot = static_cast<uint32_t>(old >> 59u);
        return (xorshifted >> rot) | (xorshifted << ((-rot) & 31u));
    }

    uint64_t next_u64() {
        uint64_t hi = next_u32();
        uint64_t lo = next_u32();
        return (hi << 32) | lo;
    }

    // Uniform double in [0, 1) with 53 random bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    // Draw from [lo, hi], then take the reciprocal with probability 1/2.
    // This is the sampling family used for the perturbation ratios.
    double uniform_maybe_inverted(double lo, double hi) {
        double v = uniform(lo, hi);
        return next_double() < 0.5 ? 1.0 / v : v;
    }

  private:
    uint64_t state_;
    uint64_t inc_;
};

} // namespace vckit
