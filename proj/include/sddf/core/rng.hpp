#pragma once
// Deterministic random number generation for the simulation harness.
//
// Streams are xoshiro256++ generators seeded through SplitMix64, so a
// 64-bit seed fully determines a stream on every platform (the standard
// library distributions are implementation-defined and are not used).
// Replication streams are derived with derive_seed(master, cell, rep):
// changing the replication count never changes earlier replications' draws.

#include <cstdint>

namespace sddf {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Mixes (master, cell, rep) into one stream seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t cell, std::uint64_t rep);

class Rng {
  public:
    explicit Rng(std::uint64_t seed = 1);

    std::uint64_t next_u64();

    // Uniform on [0, 1) with 53 random bits.
    double uniform01();
    double uniform(double lo, double hi);

    // Standard normal via the polar (Marsaglia) method.
    double normal();
    double normal(double mean, double sd);

    // Gamma(shape, scale = 1) via Marsaglia-Tsang; shape < 1 handled by the
    // usual power boost.
    double gamma(double shape, double scale);

    // Rejection-sampled truncations to [lo, hi]; rejection keeps the shape
    // of the parent density on the window.
    double truncated_normal(double mean, double sd, double lo, double hi);
    double truncated_gamma(double shape, double scale, double lo, double hi);

  private:
    std::uint64_t s_[4];
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace sddf
