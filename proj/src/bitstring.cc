#include "qpv/bitstring.h"

#include <algorithm>
#include <stdexcept>

namespace qpv {

BitString::BitString(std::size_t width) : bits_(width, 0) {
}

BitString::BitString(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
    for (auto b : bits_) {
        if (b > 1) {
            throw std::invalid_argument("BitString: bits must be 0 or 1");
        }
    }
}

BitString BitString::parse(std::string_view text) {
    std::vector<std::uint8_t> bits;
    bits.reserve(text.size());
    for (char c : text) {
        if (c != '0' && c != '1') {
            throw std::invalid_argument("BitString: invalid character in '" + std::string(text) + "'");
        }
        bits.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    return BitString(std::move(bits));
}

BitString BitString::from_lex_index(std::uint64_t index, std::size_t width) {
    if (width > 64 || (width < 64 && (index >> width) != 0)) {
        throw std::invalid_argument("BitString::from_lex_index: index does not fit in width");
    }
    BitString out(width);
    for (std::size_t i = 0; i < width; i++) {
        out.bits_[i] = static_cast<std::uint8_t>((index >> (width - 1 - i)) & 1);
    }
    return out;
}

BitString BitString::from_basis_index(std::uint64_t index, std::size_t width) {
    if (width > 64 || (width < 64 && (index >> width) != 0)) {
        throw std::invalid_argument("BitString::from_basis_index: index does not fit in width");
    }
    BitString out(width);
    for (std::size_t i = 0; i < width; i++) {
        out.bits_[i] = static_cast<std::uint8_t>((index >> i) & 1);
    }
    return out;
}

void BitString::set(std::size_t i, bool value) {
    bits_.at(i) = value ? 1 : 0;
}

void BitString::flip(std::size_t i) {
    bits_.at(i) ^= 1;
}

std::size_t BitString::weight() const {
    return hamming_weight(*this);
}

std::uint64_t BitString::lex_index() const {
    if (bits_.size() > 64) {
        throw std::invalid_argument("BitString::lex_index: width exceeds 64");
    }
    std::uint64_t v = 0;
    for (auto b : bits_) {
        v = (v << 1) | b;
    }
    return v;
}

std::uint64_t BitString::basis_index() const {
    if (bits_.size() > 64) {
        throw std::invalid_argument("BitString::basis_index: width exceeds 64");
    }
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < bits_.size(); i++) {
        v |= static_cast<std::uint64_t>(bits_[i]) << i;
    }
    return v;
}

BitString BitString::concat(const BitString& other) const {
    std::vector<std::uint8_t> bits = bits_;
    bits.insert(bits.end(), other.bits_.begin(), other.bits_.end());
    return BitString(std::move(bits));
}

BitString BitString::slice(std::size_t start, std::size_t count) const {
    if (start + count > bits_.size()) {
        throw std::out_of_range("BitString::slice out of range");
    }
    return BitString(std::vector<std::uint8_t>(bits_.begin() + start, bits_.begin() + start + count));
}

std::string BitString::to_string() const {
    std::string s;
    s.reserve(bits_.size());
    for (auto b : bits_) {
        s.push_back(static_cast<char>('0' + b));
    }
    return s;
}

std::size_t hamming_distance(const BitString& x, const BitString& y) {
    if (x.size() != y.size()) {
        throw std::invalid_argument(
            "hamming_distance: length mismatch (" + std::to_string(x.size()) + " vs " +
            std::to_string(y.size()) + ")");
    }
    std::size_t d = 0;
    for (std::size_t i = 0; i < x.size(); i++) {
        d += x[i] != y[i];
    }
    return d;
}

std::size_t hamming_weight(const BitString& x) {
    return hamming_distance(x, BitString::zeros(x.size()));
}

std::uint64_t reverse_bits(std::uint64_t value, std::size_t width) {
    std::uint64_t out = 0;
    for (std::size_t i = 0; i < width; i++) {
        out |= ((value >> i) & 1) << (width - 1 - i);
    }
    return out;
}

}  // namespace qpv
