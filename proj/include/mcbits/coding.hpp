#pragma once

#include <cstdint>
#include <vector>

#include "mcbits/bigint.hpp"
#include "mcbits/types.hpp"

namespace mcbits {

// alpha(W) = sum over the binary expansion W = sum 2^{n_k} of n_k * 2^{n_k}:
// the total number of bits assignable to a W-member equiprobable class.
BigInt alpha(const BigInt& class_size);

// Output bits for the rank-th member of an equiprobable class of the given
// size. The class splits into power-of-two groups, largest first; a member
// landing in the 2^m group receives the m low-order bits of its rank.
// Throws std::out_of_range unless 0 <= rank < class_size.
BitString assign_bits(const BigInt& rank, const BigInt& class_size);

// Exact (k_1 + ... + k_m)! / (k_1! ... k_m!).
BigInt multinomial(const std::vector<std::int64_t>& counts);

// 0-based position of seq among all distinct permutations of its multiset,
// in lexicographic order by symbol index.
BigInt multiset_rank(const StateSeq& seq);

// Inverse of multiset_rank for the multiset given by per-symbol counts.
// Throws std::out_of_range if rank >= multinomial(counts).
StateSeq multiset_unrank(const std::vector<std::int64_t>& counts, BigInt rank);

std::vector<std::int64_t> symbol_counts(const StateSeq& seq, int n);

}  // namespace mcbits
