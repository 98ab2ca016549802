#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace bdsec {

// SplitMix64 finalizer, used to derive decorrelated substream seeds.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t a,
                                    std::uint64_t b = 0, std::uint64_t c = 0) {
    std::uint64_t h = mix64(seed);
    h = mix64(h ^ a);
    h = mix64(h ^ b);
    return mix64(h ^ c);
}

// Seeded random stream. Substreams are keyed by up to three integer ids so
// that per-(terminal, sample) draws are identical no matter how the sample
// loop is ordered or partitioned.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    static Rng substream(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                         std::uint64_t c = 0) {
        return Rng(substream_seed(seed, a, b, c));
    }

    double normal() { return normal_(gen_); }
    double uniform() { return uniform_(gen_); }
    double exponential() { return -std::log1p(-uniform()); }
    std::uint64_t next_u64() { return gen_(); }

    // Circularly-symmetric complex Gaussian CN(0, variance).
    std::complex<double> cgauss(double variance) {
        if (variance <= 0.0) return {0.0, 0.0};
        const double s = std::sqrt(0.5 * variance);
        return {s * normal(), s * normal()};
    }

  private:
    std::mt19937_64 gen_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace bdsec
