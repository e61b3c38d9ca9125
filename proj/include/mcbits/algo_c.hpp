#pragma once

#include "mcbits/bigint.hpp"
#include "mcbits/coding.hpp"
#include "mcbits/markov.hpp"

namespace mcbits {

inline constexpr Symbol kNoTail = -1;

// Split of the exit sequences into the vector of lane-final symbols and the
// lanes with those finals removed. Empty lanes carry kNoTail, which orders
// before every real symbol.
struct TailSplit {
  std::vector<Symbol> last;
  std::vector<StateSeq> trimmed;
};

TailSplit tail_split(const ExitSequences& e);

// Number of trajectories sharing x's start state and exit-count matrix.
BigInt class_size(const StateSeq& x, int n);

// 0-based position of x within its class, ordered lexicographically by the
// lane-final vector and then by the concatenated trimmed lanes.
BigInt class_rank(const StateSeq& x, int n);

// Same value as class_rank, with the in-class part evaluated by a pairwise
// product tree instead of the direct suffix scan.
BigInt class_rank_fast(const StateSeq& x, int n);

// Bits assigned to x: assign_bits(class_rank(x), class_size(x)).
BitString algorithm_c(const StateSeq& x, int n);

}  // namespace mcbits
