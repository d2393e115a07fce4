// Deterministic, splittable random streams (splitmix64-seeded xoshiro256++)
// plus the variate samplers the simulation needs.
#pragma once

#include <array>
#include <cmath>
#include <cstdint>

#include "kcell/special.hpp"

namespace kcell {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class Rng {
public:
    Rng() : Rng(0) {}
    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& w : s_) w = splitmix64(sm);
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

    // uniform in [0,1)
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    // standard normal via the polar method
    double normal() {
        if (have_cache_) {
            have_cache_ = false;
            return cache_;
        }
        double u, v, s;
        do {
            u = 2.0 * next_double() - 1.0;
            v = 2.0 * next_double() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double m = std::sqrt(-2.0 * std::log(s) / s);
        cache_ = v * m;
        have_cache_ = true;
        return u * m;
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::array<std::uint64_t, 4> s_{};
    double cache_ = 0;
    bool have_cache_ = false;
};

// Reproducible stream for (masterSeed, experimentId, replicateIndex); the output
// sequence depends on the triple only, never on scheduling.
inline Rng rng_stream(std::uint64_t master_seed, std::uint64_t experiment_id, std::uint64_t replicate_index) {
    std::uint64_t sm = master_seed;
    std::uint64_t a = splitmix64(sm);
    sm = a ^ (experiment_id * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL);
    std::uint64_t b = splitmix64(sm);
    sm = b ^ (replicate_index * 0xa0761d6478bd642fULL + 0xe7037ed1a0b428dbULL);
    return Rng(splitmix64(sm));
}

// Poisson variate: inversion by multiplication below mean 30, PTRS rejection above.
inline std::uint64_t poisson(Rng& rng, double mean) {
    if (mean <= 0.0) return 0;
    if (mean < 30.0) {
        const double limit = std::exp(-mean);
        std::uint64_t k = 0;
        double p = 1.0;
        do {
            ++k;
            p *= rng.next_double();
        } while (p > limit);
        return k - 1;
    }
    // PTRS (Hormann's transformed rejection with squeeze)
    const double b = 0.931 + 2.53 * std::sqrt(mean);
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);
    const double log_mean = std::log(mean);
    for (;;) {
        double u = rng.next_double() - 0.5;
        double v = rng.next_double();
        double us = 0.5 - std::fabs(u);
        double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
        if (us >= 0.07 && v <= v_r) return static_cast<std::uint64_t>(kf);
        if (kf < 0.0 || (us < 0.013 && v > us)) continue;
        if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
            kf * log_mean - mean - log_gamma(kf + 1.0)) {
            return static_cast<std::uint64_t>(kf);
        }
    }
}

} // namespace kcell
