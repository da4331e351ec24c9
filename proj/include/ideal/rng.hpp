// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace ideal {

// Deterministic RNG wrapper. std::mt19937_64 gives a portable bit stream,
// but the std:: distributions do not, so the variate transforms live here.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    // Uniform on (0, 1): top 53 bits, then nudged off zero.
    double uniform() {
        const double u = static_cast<double>(eng_() >> 11) * 0x1.0p-53;
        return u > 0.0 ? u : 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Standard normal via Marsaglia polar, caching the spare deviate.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        has_spare_ = true;
        return u * f;
    }

    double normal(double mu, double sd) { return mu + sd * normal(); }

    double exponential(double rate = 1.0) { return -std::log(uniform()) / rate; }

    std::uint64_t next_u64() { return eng_(); }

    std::mt19937_64& engine() { return eng_; }

private:
    std::mt19937_64 eng_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

// Standard normal truncated to (lower, +inf). Plain rejection near the bulk,
// exponential-proposal rejection (Robert 1995) in the tail; accept test uses
// the shifted proposal z = lower + Exp(rate).
inline double truncated_normal_lower(Rng& rng, double lower) {
    if (lower < 0.45) {
        double z;
        do {
            z = rng.normal();
        } while (z < lower);
        return z;
    }
    const double rate = 0.5 * (lower + std::sqrt(lower * lower + 4.0));
    for (;;) {
        const double z = lower + rng.exponential(rate);
        const double d = z - rate;
        if (std::log(rng.uniform()) <= -0.5 * d * d) return z;
    }
}

// N(mu, sd^2) truncated below (positive=true) or above zero.
inline double truncated_normal_halfline(Rng& rng, double mu, double sd, bool positive) {
    if (positive) return mu + sd * truncated_normal_lower(rng, -mu / sd);
    return mu - sd * truncated_normal_lower(rng, mu / sd);
}

}  // namespace ideal
