#pragma once

// Deterministic, splittable random streams. Every experiment draws from a
// stream keyed by (master_seed, stream_index), so trials are independent and
// reproducible regardless of execution order or thread count. The generator
// and the Gaussian sampler are pinned here rather than taken from <random>
// because identical byte output across runs and platforms is a contract.

#include <cmath>
#include <complex>
#include <cstdint>

namespace latred {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// xoshiro256++ (Blackman & Vigna), seeded via splitmix64.
class Rng {
public:
    explicit Rng(std::uint64_t seed) { seed_from(seed); }

    Rng(std::uint64_t master_seed, std::uint64_t stream_index) {
        std::uint64_t mix = master_seed;
        std::uint64_t a = splitmix64(mix);
        mix ^= stream_index * 0x9e3779b97f4a7c15ULL + 0x6a09e667f3bcc909ULL;
        std::uint64_t b = splitmix64(mix);
        seed_from(a ^ (b + 0x2545f4914f6cdd1dULL));
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

    // Uniform in [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform integer in [lo, hi], inclusive. Unbiased via rejection.
    long long uniform_int(long long lo, long long hi) {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
        std::uint64_t u;
        do {
            u = next_u64();
        } while (u >= limit);
        return lo + static_cast<long long>(u % span);
    }

    // Standard normal via Box-Muller, second value cached.
    double gaussian() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        double u1;
        do {
            u1 = uniform();
        } while (u1 <= 0.0);
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double two_pi = 6.283185307179586476925286766559;
        cached_ = r * std::sin(two_pi * u2);
        have_cached_ = true;
        return r * std::cos(two_pi * u2);
    }

    // Circularly-symmetric complex Gaussian, E|z|^2 = 1.
    std::complex<double> cgaussian() {
        const double inv_sqrt2 = 0.70710678118654752440;
        const double re = gaussian() * inv_sqrt2;
        const double im = gaussian() * inv_sqrt2;
        return {re, im};
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    void seed_from(std::uint64_t seed) {
        for (auto& s : s_) s = splitmix64(seed);
        have_cached_ = false;
        cached_ = 0.0;
    }

    std::uint64_t s_[4] = {};
    bool have_cached_ = false;
    double cached_ = 0.0;
};

}  // namespace latred
