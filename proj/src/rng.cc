#include "qpv/rng.h"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qpv {

std::uint64_t splitmix64_mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    return splitmix64_mix(master + 0x9e3779b97f4a7c15ULL * (index + 1));
}

std::uint64_t Rng::below(std::uint64_t bound) {
    if (bound == 0) {
        throw std::invalid_argument("Rng::below: bound must be positive");
    }
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    while (true) {
        std::uint64_t v = engine_();
        if (v < limit) {
            return v % bound;
        }
    }
}

double Rng::gaussian() {
    double u1 = uniform();
    while (u1 <= 0.0) {
        u1 = uniform();
    }
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

BitString Rng::bits(std::size_t width) {
    BitString out(width);
    for (std::size_t i = 0; i < width; i++) {
        out.set(i, bit());
    }
    return out;
}

}  // namespace qpv
