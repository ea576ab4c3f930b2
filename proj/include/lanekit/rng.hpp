#pragma once

#include <cmath>
#include <cstdint>

namespace lanekit {

/// splitmix64 stream. Used instead of <random> distributions because those
/// are implementation-defined and the dataset contract is byte-identical
/// output across platforms and thread counts.
class Rng {
  public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    uint64_t next_u64() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1) with 53 mantissa bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [lo, hi], inclusive.
    int uniform_int(int lo, int hi) {
        const uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
        return lo + static_cast<int>(next_u64() % span);
    }

    /// Box-Muller; consumes exactly two draws.
    double normal(double sigma) {
        double u1 = uniform();
        const double u2 = uniform();
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        return sigma * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

    /// Knuth Poisson sampler; fine for the small rates used here.
    int poisson(double rate) {
        if (rate <= 0.0) return 0;
        const double limit = std::exp(-rate);
        int k = 0;
        double prod = 1.0;
        do {
            prod *= uniform();
            ++k;
        } while (prod > limit);
        return k - 1;
    }

  private:
    uint64_t state_;
};

/// Splittable per-item seed so parallel generation stays reproducible.
inline uint64_t mix_seed(uint64_t master, uint64_t index) {
    Rng r(master ^ (0x9e3779b97f4a7c15ULL * (index + 1)));
    return r.next_u64();
}

}  // namespace lanekit
