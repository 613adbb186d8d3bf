#pragma once

#include <cmath>
#include <cstdint>

namespace atiyah4 {

// Deterministic splitmix64 generator. Every sampled object in the project is
// a pure function of (seed, index) through this generator, so runs reproduce
// bit-for-bit across platforms and thread counts.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1).
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    // Standard normal via Box-Muller.
    double normal() {
        const double u1 = 1.0 - next_double();  // (0, 1]
        const double u2 = next_double();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    // Per-index sub-seed: seed ^ hash(index). Keeps parallel sampling
    // independent of scheduling.
    static std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t index) {
        Rng h(index + 0x2545f4914f6cdd1dULL);
        return seed ^ h.next_u64();
    }

  private:
    std::uint64_t state_;
};

}  // namespace atiyah4
