#pragma once

#include <cmath>
#include <cstdint>

namespace rsnn {

// Counter-based stream splitting: every random stream in a run is keyed by
// (master seed, stream kind, two indices), so generation order never depends
// on scheduling and parallel expansion stays reproducible.

enum class Stream : std::uint64_t {
    stimulus   = 1,
    background = 2,
    mismatch   = 3,
    init       = 4,
    generic    = 5,
};

inline std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, Stream kind,
                                 std::uint64_t idx0 = 0, std::uint64_t idx1 = 0) {
    std::uint64_t s = master;
    std::uint64_t h = splitmix64(s);
    s ^= static_cast<std::uint64_t>(kind) * 0xd6e8feb86659fd93ull;
    h ^= splitmix64(s);
    s ^= (idx0 + 1) * 0xa0761d6478bd642full;
    h ^= splitmix64(s);
    s ^= (idx1 + 1) * 0xe7037ed1a0b428dbull;
    h ^= splitmix64(s);
    return h;
}

// xoshiro256** with hand-rolled variate transforms. Distribution code is our
// own so sequences do not depend on the standard library implementation.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t s = seed;
        for (auto& w : state_) w = splitmix64(s);
    }

    std::uint64_t next_u64() {
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

    // uniform in [0, 1)
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // exponential with the given rate (events per unit time); rate > 0
    double exponential(double rate) {
        return -std::log1p(-uniform01()) / rate;
    }

    // standard normal via Box-Muller, one value per call (no caching so the
    // stream position stays a pure function of the call count)
    double normal() {
        double u1;
        do {
            u1 = uniform01();
        } while (u1 <= 0.0);
        const double u2 = uniform01();
        const double two_pi = 6.283185307179586476925286766559;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
    }

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    std::uint64_t state_[4]{};
};

inline Rng make_rng(std::uint64_t master, Stream kind,
                    std::uint64_t idx0 = 0, std::uint64_t idx1 = 0) {
    return Rng(derive_seed(master, kind, idx0, idx1));
}

// FNV-1a, used for config digests and network/record hashes.
inline std::uint64_t fnv1a(const void* data, std::size_t n,
                           std::uint64_t h = 0xcbf29ce484222325ull) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ull;
    }
    return h;
}

} // namespace rsnn
