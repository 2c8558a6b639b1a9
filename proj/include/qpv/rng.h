#pragma once

#include <cstdint>
#include <random>

#include "qpv/bitstring.h"

namespace qpv {

/// SplitMix64 output function. Bijective on 64-bit words.
std::uint64_t splitmix64_mix(std::uint64_t z);

/// Seed of trial `index` under `master`. Pinned: reports depend on it.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// Explicit random stream. All conversions from raw engine output are done
/// here (not with <random> distributions) so that draws are identical across
/// standard library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {
    }

    std::uint64_t next_u64() { return engine_(); }
    bool bit() { return (engine_() >> 63) != 0; }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform() < p; }

    /// Uniform integer in [0, bound). Rejection sampling, no modulo bias.
    std::uint64_t below(std::uint64_t bound);

    /// Standard normal variate (Box-Muller on uniform()).
    double gaussian();

    BitString bits(std::size_t width);

private:
    std::mt19937_64 engine_;
};

}  // namespace qpv
