#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "qpv/bitstring.h"
#include "qpv/errors.h"

namespace qpv {

inline constexpr int kMaxExplicitN = 12;
inline constexpr int kMaxExplicitM = 64;

/// f : {0,1}^n x {0,1}^n -> {0,1}^m, either as an explicit table of 2^{2n}
/// outputs or as a seeded generator.
///
/// Explicit entries are indexed by the lex index of x||y and hold the lex
/// index of the output string.
///
/// Seeded evaluation (pinned by test vectors):
///   s = mix(seed + G)
///   for each 64-bit chunk c_k of x||y (MSB-first, last chunk short):
///       s = mix(s ^ mix(c_k + (k+1) G))
///   word_j = mix(s + (j+1) G), output bit i = bit 63 - (i mod 64) of word_{i/64}
/// where mix is the SplitMix64 finalizer and G = 0x9e3779b97f4a7c15.
class FunctionTable {
public:
    static FunctionTable from_table(int n, int m, std::vector<std::uint64_t> outputs);
    static FunctionTable seeded(int n, int m, std::uint64_t seed);
    static FunctionTable from_rule(int n, int m, const std::function<BitString(const BitString&, const BitString&)>& rule);

    /// f(x, y) = z0 for all inputs.
    static FunctionTable constant(int n, const BitString& z0);
    /// f(x, y) = x XOR y (m = n).
    static FunctionTable xor_function(int n);
    /// f(x, y) = y (m = n); the plain protocols.
    static FunctionTable select_y(int n);

    int n() const { return n_; }
    int m() const { return m_; }
    bool is_seeded() const { return seeded_; }
    std::uint64_t seed() const { return seed_; }
    const std::vector<std::uint64_t>& outputs() const { return outputs_; }

    BitString operator()(const BitString& x, const BitString& y) const;

    /// Lex index of f(x, y) from lex indices of x and y. Requires n <= 32, m <= 64.
    std::uint64_t eval_index(std::uint64_t x, std::uint64_t y) const;

    /// Explicit copy; a seeded table is enumerated (n <= 12, m <= 64).
    FunctionTable materialize() const;

    /// Output positions relabeled: new z_i = old z_{perm[i]}.
    FunctionTable permute_outputs(const std::vector<int>& perm) const;

    void write(std::ostream& out) const;
    static FunctionTable read(std::istream& in);
    void save(const std::string& path) const;
    static FunctionTable load(const std::string& path);

private:
    FunctionTable(int n, int m) : n_(n), m_(m) {
    }

    int n_;
    int m_;
    bool seeded_ = false;
    std::uint64_t seed_ = 0;
    std::vector<std::uint64_t> outputs_;
};

/// Raw generator words for x||y; exposed for test vectors.
std::vector<std::uint64_t> seeded_words(std::uint64_t seed, const BitString& xy, int words);

}  // namespace qpv
