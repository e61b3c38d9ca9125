#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "mcbits/types.hpp"

namespace mcbits {

// Packed bit format: bits fill bytes most-significant-bit first; the final
// partial byte is zero-padded and a trailing byte records how many bits of
// the last data byte are valid (8 for a full byte, 0 for an empty string).
inline std::vector<std::uint8_t> pack_bits(const BitString& bits) {
  std::vector<std::uint8_t> out;
  out.reserve(bits.size() / 8 + 2);
  std::uint8_t acc = 0;
  int filled = 0;
  for (char c : bits) {
    acc = static_cast<std::uint8_t>((acc << 1) | (c == '1'));
    if (++filled == 8) {
      out.push_back(acc);
      acc = 0;
      filled = 0;
    }
  }
  if (filled > 0) out.push_back(static_cast<std::uint8_t>(acc << (8 - filled)));
  std::uint8_t valid = 0;
  if (!bits.empty()) valid = static_cast<std::uint8_t>(filled == 0 ? 8 : filled);
  out.push_back(valid);
  return out;
}

inline BitString unpack_bits(const std::vector<std::uint8_t>& bytes) {
  if (bytes.empty()) throw std::invalid_argument("unpack_bits: missing trailing count byte");
  const std::uint8_t valid = bytes.back();
  if (valid > 8) throw std::invalid_argument("unpack_bits: bad trailing count byte");
  if (valid == 0 && bytes.size() != 1)
    throw std::invalid_argument("unpack_bits: empty string must have no data bytes");
  BitString bits;
  for (std::size_t i = 0; i + 1 < bytes.size(); ++i) {
    const int take = (i + 2 == bytes.size()) ? valid : 8;
    for (int b = 0; b < take; ++b) bits += ((bytes[i] >> (7 - b)) & 1) ? '1' : '0';
  }
  return bits;
}

}  // namespace mcbits
