#pragma once

#include <cstdint>
#include <random>

namespace uh {

/// Deterministic uniform generator. Draws are derived from the mt19937_64
/// stream directly so that sequences are identical across platforms and
/// standard library implementations.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    /// Uniform in [0, 1) with 53 bits of precision.
    double unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * unit(); }

    /// Uniform integer in [0, bound), unbiased.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
        std::uint64_t x;
        do {
            x = eng_();
        } while (x >= limit);
        return x % bound;
    }

    std::uint64_t raw() { return eng_(); }

  private:
    std::mt19937_64 eng_;
};

}  // namespace uh
