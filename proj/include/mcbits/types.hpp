#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace mcbits {

// Symbols are 0-based indices into an alphabet of size n. The symbol order
// used by every lexicographic construction in this library is the index
// order 0 < 1 < ... < n-1. External interfaces (state names, tokens) map
// to these indices at the boundary.
using Symbol = int;
using StateSeq = std::vector<Symbol>;

// Output bits as '0'/'1' characters. "" is the empty output.
using BitString = std::string;

struct Alphabet {
  int n = 0;
  std::vector<std::string> names;  // empty, or one name per symbol

  explicit Alphabet(int size) : n(size) {
    if (size < 1) throw std::invalid_argument("alphabet size must be >= 1");
  }
  Alphabet(std::vector<std::string> state_names)
      : n(static_cast<int>(state_names.size())), names(std::move(state_names)) {
    if (n < 1) throw std::invalid_argument("alphabet needs at least one state");
  }

  const std::string& name(Symbol s) const;
  // Index of a token; -1 if it is not a state name.
  int find(const std::string& token) const;
};

// Exit counts: (i, j) is the number of times state j follows state i.
class CountMatrix {
 public:
  explicit CountMatrix(int n) : n_(n), k_(static_cast<std::size_t>(n) * n, 0) {}

  std::int64_t& operator()(int i, int j) { return k_[static_cast<std::size_t>(i) * n_ + j]; }
  std::int64_t operator()(int i, int j) const { return k_[static_cast<std::size_t>(i) * n_ + j]; }

  int states() const { return n_; }
  std::int64_t row_total(int i) const;
  std::int64_t total() const;

  friend bool operator==(const CountMatrix&, const CountMatrix&) = default;
  const std::vector<std::int64_t>& flat() const { return k_; }

 private:
  int n_;
  std::vector<std::int64_t> k_;
};

void check_sequence(const StateSeq& x, int n);

}  // namespace mcbits
