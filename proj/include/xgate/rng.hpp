#pragma once

// Portable random number generation with an explicit, documented state so
// batches and weight draws are reproducible bit-for-bit across languages.
//
//   splitmix64      Steele/Lea/Vigna: state += 0x9E3779B97F4A7C15;
//                   z = state; z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9;
//                   z = (z ^ (z >> 27)) * 0x94D049BB133111EB; return z ^ (z >> 31)
//   xoshiro256**    Blackman/Vigna, seeded by four splitmix64 draws
//   uniform01       (next() >> 11) * 2^-53, in [0, 1)
//   below(n)        128-bit multiply-high of next() with n (Lemire, no rejection)
//   gauss           Box-Muller on two uniform draws, with the spare cached
//
// Test vectors for both generators are frozen in the test suite.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace xgate {

struct SplitMix64 {
    std::uint64_t state = 0;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        state += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
};

class Xoshiro256 {
  public:
    explicit Xoshiro256(std::uint64_t seed) {
        SplitMix64 sm(seed);
        for (auto& w : s_) w = sm.next();
    }

    static Xoshiro256 from_state(const std::array<std::uint64_t, 4>& s) {
        Xoshiro256 r(0);
        r.s_ = s;
        return r;
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform double in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, n); multiply-high keeps this portable and
    // branch-free (the tiny bias is irrelevant at these scales).
    std::uint64_t below(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next()) * static_cast<unsigned __int128>(n)) >> 64);
    }

    // Standard normal draw, Box-Muller with cached spare.
    double gauss() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        // u1 in (0, 1] so the log is finite
        const double u1 = (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53;
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

    const std::array<std::uint64_t, 4>& state() const { return s_; }

  private:
    static std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

    std::array<std::uint64_t, 4> s_{};
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace xgate
