#pragma once

#include <iosfwd>
#include <string>

#include "qpv/strategy.h"

namespace qpv {

inline constexpr std::uint32_t kStrategyFormatVersion = 1;

/// Binary container, little-endian:
///   "QPVS", u32 version, u8 kind, u8 response index,
///   i32 n, m, q, a_keep, a_comm, b_keep, b_comm, u32 name length, name bytes,
///   state amplitudes, u32 count + U^x (ascending x), u32 count + V^y,
///   BB84: u32 slots, then per slot Alice's then Bob's elements (ascending outcome);
///   routing: u32 slots, K per slot, L per slot, then i32 outputs (Alice, then Bob).
/// Matrices are stored row-major as (re, im) doubles; dimensions follow from
/// the header.
void write_strategy(std::ostream& out, const Strategy& s);
Strategy read_strategy(std::istream& in);

/// File wrappers; throw IoError on open or write failure.
void save_strategy(const std::string& path, const Strategy& s);
Strategy load_strategy(const std::string& path);

}  // namespace qpv
