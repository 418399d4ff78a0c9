#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "towlab/point.hpp"

namespace towlab {

// splitmix64; used to derive well-separated child seeds from (master, stream).
inline uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

inline uint64_t mix_seed(uint64_t master, uint64_t stream) {
    uint64_t s = master;
    uint64_t a = splitmix64(s);
    s ^= stream * 0xD1342543DE82EF95ull + 0x2545F4914F6CDD1Dull;
    uint64_t b = splitmix64(s);
    return a ^ (b + 0x9E3779B97F4A7C15ull);
}

// Deterministic generator: mt19937_64 (bit-exact across platforms) plus
// hand-rolled double/normal conversions, since the std distributions are
// implementation-defined.
class Rng {
public:
    explicit Rng(uint64_t seed) : eng_(seed) {}

    static Rng child(uint64_t master_seed, uint64_t stream) {
        return Rng(mix_seed(master_seed, stream));
    }

    uint64_t next_u64() { return eng_(); }

    // uniform on [0, 1)
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    // standard normal via Box-Muller; one value per call, no cached state
    double normal() {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    // uniform on the open ball B_eps(center): Gaussian direction, radius eps*U^{1/n}
    Point uniform_ball(const Point& center, double eps) {
        const int n = center.dim();
        for (;;) {
            Point dir(n);
            double s2 = 0;
            for (int i = 0; i < n; ++i) {
                dir[i] = normal();
                s2 += dir[i] * dir[i];
            }
            if (s2 < 1e-300) continue;
            const double r = eps * std::pow(uniform(), 1.0 / n) / std::sqrt(s2);
            Point out = center;
            for (int i = 0; i < n; ++i) out[i] += r * dir[i];
            if (dist(out, center) < eps) return out;  // guards the open-ball contract
        }
    }

private:
    std::mt19937_64 eng_;
};

}  // namespace towlab
