// SPDX-License-Identifier: Apache-2.0
#ifndef VESSELMIP_RNG_HPP
#define VESSELMIP_RNG_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <random>

namespace vesselmip {

// Stateless 64-bit mixer for deriving independent sub-seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// mt19937_64 with hand-mapped draws.  The engine's output sequence is
// pinned by the standard, so results are identical across platforms
// (std::uniform_real_distribution and friends are not).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t bits() { return gen_(); }

    // [0, 1)
    double uniform() { return double(gen_() >> 11) * 0x1.0p-53; }

    // [lo, hi)
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // {0, ..., n-1}
    int below(int n) { return int(gen_() % std::uint64_t(n)); }

    // Uniform direction on the unit sphere.
    std::array<double, 3> unit_vector() {
        const double z = uniform(-1.0, 1.0);
        const double phi = uniform(0.0, 6.283185307179586476925286766559);
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        return {r * std::cos(phi), r * std::sin(phi), z};
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace vesselmip

#endif
