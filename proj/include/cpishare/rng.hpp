#pragma once

#include <cmath>
#include <cstdint>

namespace cpishare {

/**
 * Deterministic random stream used by every synthetic-data generator.
 *
 * The generator is SplitMix64 (Steele, Lea & Vigna 2014, public-domain
 * reference constants), chosen over the platform engines so that seeded
 * streams are identical everywhere and easy to replicate in other languages:
 *
 *   state += 0x9E3779B97F4A7C15
 *   z = state; z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
 *   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
 *   return z ^ (z >> 31)
 *
 * uniform() maps a draw to (0, 1] via ((u >> 11) + 1) * 2^-53, so it is safe
 * to take its logarithm. normal() is the Box-Muller cosine branch and consumes
 * exactly two uniforms per variate (nothing is cached).
 */
class Prng {
public:
    explicit Prng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    double uniform() { return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; }

    double normal() {
        double u1 = uniform();
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

private:
    std::uint64_t state_;
};

}  // namespace cpishare
