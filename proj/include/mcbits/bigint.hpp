#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <string>

namespace mcbits {

// Exact arithmetic everywhere: class sizes and ranks overflow 64 bits for
// modest inputs, and the enumeration harness needs probabilities that sum
// to exactly 1.
using BigInt = mpz_class;
using BigRat = mpq_class;

// Number of bits in x; bit_length(0) == 0.
inline std::size_t bit_length(const BigInt& x) {
  if (x == 0) return 0;
  return mpz_sizeinbase(x.get_mpz_t(), 2);
}

inline BigInt pow2(std::size_t k) {
  BigInt r;
  mpz_setbit(r.get_mpz_t(), k);
  return r;
}

inline double to_double(const BigRat& q) { return q.get_d(); }

// Fixed-point decimal rendering, round half away from zero.
std::string to_decimal(const BigRat& q, int digits);

}  // namespace mcbits
