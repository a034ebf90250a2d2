#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace geoloc {

// Pinned pseudo-random generator for the synthetic graph generators.
//
// The generated graphs are part of the test contract, so the full derivation
// from a 64-bit seed is fixed here and must not change:
//
//   state      : four 64-bit words produced by iterating splitmix64
//                (Steele/Lea/Flood 2014) over the seed
//   next_u64   : xoshiro256** 1.0 (Blackman/Vigna 2018)
//   next_double: (next_u64() >> 11) * 2^-53, uniform in [0,1)
//   next_below : high 64 bits of the 128-bit product next_u64() * n
//   sample     : partial Fisher-Yates over 0..n-1, taking the first k slots
//
// Any port in another language that reproduces these five rules reproduces
// the graphs bit for bit.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t x = seed;
        for (auto& word : state_) {
            // splitmix64
            x += 0x9e3779b97f4a7c15ULL;
            std::uint64_t z = x;
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
            word = z ^ (z >> 31);
        }
    }

    std::uint64_t next_u64() {
        // xoshiro256**
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return next_double() < p; }

    /// Uniform integer in [0, n). n must be > 0.
    std::uint64_t next_below(std::uint64_t n) {
        const auto wide = static_cast<unsigned __int128>(next_u64()) * n;
        return static_cast<std::uint64_t>(wide >> 64);
    }

    /// First k entries of a partial Fisher-Yates shuffle of 0..n-1 (k <= n).
    std::vector<std::uint32_t> sample_distinct(std::uint32_t n, std::uint32_t k) {
        std::vector<std::uint32_t> pool(n);
        for (std::uint32_t i = 0; i < n; ++i) pool[i] = i;
        for (std::uint32_t i = 0; i < k; ++i) {
            const auto j = i + static_cast<std::uint32_t>(next_below(n - i));
            std::swap(pool[i], pool[j]);
        }
        pool.resize(k);
        return pool;
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::array<std::uint64_t, 4> state_;
};

} // namespace geoloc
