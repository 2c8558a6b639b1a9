#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace qpv {

/// A fixed-width string of bits. Bit i is the i-th character of the textual
/// form, so "101" has bits {1, 0, 1}.
///
/// Two integer encodings are used throughout the library:
///  - lex_index(): the string read as a binary number, first bit most
///    significant. This is the order of function tables and outcome labels.
///  - basis_index(): bit i weighted by 2^i. This is the computational-basis
///    index of a register whose qubit i holds bit i.
class BitString {
public:
    BitString() = default;
    explicit BitString(std::size_t width);
    explicit BitString(std::vector<std::uint8_t> bits);

    static BitString parse(std::string_view text);
    static BitString from_lex_index(std::uint64_t index, std::size_t width);
    static BitString from_basis_index(std::uint64_t index, std::size_t width);
    static BitString zeros(std::size_t width) { return BitString(width); }

    std::size_t size() const { return bits_.size(); }
    bool empty() const { return bits_.empty(); }

    std::uint8_t operator[](std::size_t i) const { return bits_[i]; }
    void set(std::size_t i, bool value);
    void flip(std::size_t i);

    std::size_t weight() const;
    std::uint64_t lex_index() const;
    std::uint64_t basis_index() const;

    BitString concat(const BitString& other) const;
    BitString slice(std::size_t start, std::size_t count) const;

    std::string to_string() const;
    const std::vector<std::uint8_t>& bits() const { return bits_; }

    bool operator==(const BitString&) const = default;

private:
    std::vector<std::uint8_t> bits_;
};

/// Number of positions at which x and y differ. Throws on length mismatch.
std::size_t hamming_distance(const BitString& x, const BitString& y);

/// Number of ones, computed as the distance to the all-zero string.
std::size_t hamming_weight(const BitString& x);

/// Reverses the low `width` bits of `value`; converts between lex_index and
/// basis_index of the same string.
std::uint64_t reverse_bits(std::uint64_t value, std::size_t width);

}  // namespace qpv
