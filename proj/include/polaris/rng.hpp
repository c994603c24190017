#pragma once

#include <cmath>
#include <cstdint>

namespace polaris {

// splitmix64 step; used for seeding and for mixing stream ids into seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Deterministic substream seed for (base, stream, index) so sweep units are
// independent of worker scheduling.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream, std::uint64_t index) {
    std::uint64_t s = base;
    std::uint64_t a = splitmix64(s);
    s = a ^ (0x632be59bd9b4e019ull * (stream + 1));
    std::uint64_t b = splitmix64(s);
    s = b ^ (0x9e3779b97f4a7c15ull * (index + 1));
    return splitmix64(s);
}

// xoshiro256++ (Blackman & Vigna), state filled from splitmix64.
class Rng {
public:
    explicit Rng(std::uint64_t seed) { reseed(seed); }

    void reseed(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& w : s_) w = splitmix64(sm);
        has_spare_ = false;
        spare_ = 0.0;
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

    // 53-bit uniform in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Standard normal via Box-Muller; second draw of each pair is cached.
    double gaussian() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t s_[4] = {};
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace polaris
