#pragma once

#include <stdexcept>

#include "mcbits/types.hpp"

namespace mcbits {

inline constexpr int kPeresDefaultDepth = 32;

struct alphabet_too_large : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Pairwise comparison scheme for an n-face coin: per pair, a lower-then-higher
// symbol emits 0, higher-then-lower emits 1, equal pairs emit nothing. A
// trailing unpaired symbol is ignored.
BitString von_neumann(const StateSeq& x);

// Rank-based realization of the class-partition scheme: the output is
// assign_bits(multiset_rank(x), multinomial(symbol counts of x)).
BitString elias(const StateSeq& x);

// Iterated pairwise extraction for a two-face coin. Level 1 is von Neumann;
// deeper levels recurse on the pairwise XOR stream and on the values of the
// equal pairs (first element of each). Odd-length input drops its final
// symbol. Throws alphabet_too_large if a symbol other than 0/1 appears.
BitString peres(const StateSeq& x, int depth = kPeresDefaultDepth);

enum class Scheme { von_neumann, elias, peres };

struct Extractor {
  Scheme scheme = Scheme::elias;
  int peres_depth = kPeresDefaultDepth;

  BitString operator()(const StateSeq& x) const {
    switch (scheme) {
      case Scheme::von_neumann: return von_neumann(x);
      case Scheme::elias: return elias(x);
      case Scheme::peres: return peres(x, peres_depth);
    }
    throw std::logic_error("unknown scheme");
  }
};

}  // namespace mcbits
