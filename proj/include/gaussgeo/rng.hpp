// rng.hpp — deterministic, platform-independent random streams
//
// xoshiro256++ seeded through splitmix64. Uniform doubles come straight from
// the top 53 bits, normals from Box–Muller, so identical seeds give identical
// streams on every platform (std::uniform_real_distribution and
// std::normal_distribution are implementation-defined and would not).
#pragma once

#include <cstdint>
#include <optional>
#include <cmath>

namespace gaussgeo {

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Per-sample stream derivation: sample i under master seed s always sees the
// same stream, no matter how samples are distributed over workers.
inline std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t state = seed ^ (0x632be59bd9b4e019ULL * (index + 1));
    splitmix64_next(state);
    return splitmix64_next(state);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t state = seed;
        for (auto& word : s_) word = splitmix64_next(state);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // uniform on [0, 1), 53-bit resolution
    double next_uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // standard normal via Box–Muller, caching the spare deviate
    double next_normal() {
        if (spare_) {
            const double v = *spare_;
            spare_.reset();
            return v;
        }
        const double u1 = 1.0 - next_uniform();  // (0, 1], keeps log finite
        const double u2 = next_uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(angle);
        return r * std::cos(angle);
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t s_[4];
    std::optional<double> spare_;
};

}  // namespace gaussgeo
