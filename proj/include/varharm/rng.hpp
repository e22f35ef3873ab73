#pragma once

#include <cstdint>

#include "varharm/grid.hpp"

namespace varharm {

/// xoshiro256++ seeded through splitmix64. Self-contained so that seeded
/// runs reproduce bit-for-bit across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next_u64();
    double uniform();                       // [0, 1)
    double uniform(double a, double b);
    double normal();                        // Box-Muller
    int uniform_int(int lo, int hi);        // inclusive

    /// Independent stream derived from this seed and a stream id.
    Rng fork(std::uint64_t stream) const;

private:
    std::uint64_t s_[4];
    double spare_ = 0.0;
    bool has_spare_ = false;
    std::uint64_t seed_;
};

/// Sum of k seeded Gaussian bumps with random centers, widths and signs.
GridFunction random_bumps(const Grid& g, Rng& rng, int k_min = 3, int k_max = 8,
                          bool nonneg = false);

/// Mixed test field: bumps, a few scaled indicators, and a smooth oscillation.
GridFunction random_field(const Grid& g, Rng& rng, bool nonneg = false);

}  // namespace varharm
