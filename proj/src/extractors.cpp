#include "mcbits/extractors.hpp"

#include "mcbits/coding.hpp"

namespace mcbits {

BitString von_neumann(const StateSeq& x) {
  BitString out;
  for (std::size_t t = 0; t + 1 < x.size(); t += 2) {
    if (x[t] < x[t + 1])
      out += '0';
    else if (x[t] > x[t + 1])
      out += '1';
  }
  return out;
}

BitString elias(const StateSeq& x) {
  if (x.empty()) return {};
  int n = 0;
  for (Symbol s : x) n = std::max(n, s + 1);
  return assign_bits(multiset_rank(x), multinomial(symbol_counts(x, n)));
}

namespace {

BitString peres_rec(const std::vector<char>& bits, int depth) {
  if (bits.size() < 2) return {};
  const std::size_t m = bits.size() / 2;

  BitString out;
  std::vector<char> xors, equal_values;
  xors.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    const char a = bits[2 * i], b = bits[2 * i + 1];
    if (a != b)
      out += a ? '1' : '0';
    else
      equal_values.push_back(a);
    xors.push_back(a ^ b);
  }
  if (depth == 1) return out;
  out += peres_rec(xors, depth - 1);
  out += peres_rec(equal_values, depth - 1);
  return out;
}

}  // namespace

BitString peres(const StateSeq& x, int depth) {
  if (depth < 1) throw std::invalid_argument("peres: depth must be >= 1");
  std::vector<char> bits;
  bits.reserve(x.size());
  for (Symbol s : x) {
    if (s != 0 && s != 1) throw alphabet_too_large("peres: input must be over two symbols");
    bits.push_back(static_cast<char>(s));
  }
  return peres_rec(bits, depth);
}

}  // namespace mcbits
