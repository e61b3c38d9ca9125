#include "mcbits/coding.hpp"

#include <algorithm>
#include <stdexcept>

namespace mcbits {

const std::string& Alphabet::name(Symbol s) const {
  static const std::string empty;
  if (s < 0 || s >= n) throw std::out_of_range("symbol index out of range");
  return names.empty() ? empty : names[static_cast<std::size_t>(s)];
}

int Alphabet::find(const std::string& token) const {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == token) return static_cast<int>(i);
  return -1;
}

std::int64_t CountMatrix::row_total(int i) const {
  std::int64_t t = 0;
  for (int j = 0; j < n_; ++j) t += (*this)(i, j);
  return t;
}

std::int64_t CountMatrix::total() const {
  std::int64_t t = 0;
  for (auto v : k_) t += v;
  return t;
}

void check_sequence(const StateSeq& x, int n) {
  for (Symbol s : x)
    if (s < 0 || s >= n) throw std::invalid_argument("symbol index out of range");
}

BigInt alpha(const BigInt& class_size) {
  if (class_size < 0) throw std::invalid_argument("alpha: negative argument");
  BigInt sum = 0;
  const std::size_t top = bit_length(class_size);
  for (std::size_t b = 0; b < top; ++b) {
    if (mpz_tstbit(class_size.get_mpz_t(), b)) {
      BigInt term(static_cast<unsigned long>(b));
      term <<= b;
      sum += term;
    }
  }
  return sum;
}

BitString assign_bits(const BigInt& rank, const BigInt& class_size) {
  if (rank < 0 || rank >= class_size) throw std::out_of_range("assign_bits: rank out of range");
  // Walk the power-of-two groups from the largest down until the remaining
  // rank fits; the group's width is the output length.
  BigInt r = rank;
  std::size_t b = bit_length(class_size);
  while (b-- > 0) {
    if (!mpz_tstbit(class_size.get_mpz_t(), b)) continue;
    if (bit_length(r) <= b) {
      BitString out(b, '0');
      for (std::size_t i = 0; i < b; ++i)
        if (mpz_tstbit(r.get_mpz_t(), b - 1 - i)) out[i] = '1';
      return out;
    }
    r -= pow2(b);
  }
  throw std::logic_error("assign_bits: groups did not cover the class");
}

BigInt multinomial(const std::vector<std::int64_t>& counts) {
  BigInt result = 1;
  unsigned long total = 0;
  BigInt binom;
  for (std::int64_t c : counts) {
    if (c < 0) throw std::invalid_argument("multinomial: negative count");
    total += static_cast<unsigned long>(c);
    mpz_bin_uiui(binom.get_mpz_t(), total, static_cast<unsigned long>(c));
    result *= binom;
  }
  return result;
}

std::vector<std::int64_t> symbol_counts(const StateSeq& seq, int n) {
  std::vector<std::int64_t> c(static_cast<std::size_t>(n), 0);
  for (Symbol s : seq) {
    if (s < 0 || s >= n) throw std::invalid_argument("symbol index out of range");
    ++c[static_cast<std::size_t>(s)];
  }
  return c;
}

BigInt multiset_rank(const StateSeq& seq) {
  if (seq.empty()) return 0;
  const int n = *std::max_element(seq.begin(), seq.end()) + 1;
  std::vector<std::int64_t> c = symbol_counts(seq, n);

  // perms always holds the number of distinct arrangements of the suffix
  // starting at the current position; every division below is exact.
  BigInt perms = multinomial(c);
  BigInt rank = 0, term;
  std::int64_t remaining = static_cast<std::int64_t>(seq.size());
  for (Symbol x : seq) {
    for (Symbol w = 0; w < x; ++w) {
      if (c[w] == 0) continue;
      term = perms * c[w];
      mpz_divexact_ui(term.get_mpz_t(), term.get_mpz_t(), static_cast<unsigned long>(remaining));
      rank += term;
    }
    perms *= c[x];
    mpz_divexact_ui(perms.get_mpz_t(), perms.get_mpz_t(), static_cast<unsigned long>(remaining));
    --c[x];
    --remaining;
  }
  return rank;
}

StateSeq multiset_unrank(const std::vector<std::int64_t>& counts, BigInt rank) {
  std::vector<std::int64_t> c = counts;
  BigInt perms = multinomial(c);
  if (rank < 0 || rank >= perms) throw std::out_of_range("multiset_unrank: rank out of range");

  std::int64_t remaining = 0;
  for (auto v : c) remaining += v;

  StateSeq seq;
  seq.reserve(static_cast<std::size_t>(remaining));
  BigInt cnt;
  while (remaining > 0) {
    for (Symbol w = 0; w < static_cast<Symbol>(c.size()); ++w) {
      if (c[w] == 0) continue;
      cnt = perms * c[w];
      mpz_divexact_ui(cnt.get_mpz_t(), cnt.get_mpz_t(), static_cast<unsigned long>(remaining));
      if (rank < cnt) {
        seq.push_back(w);
        perms = cnt;
        --c[w];
        --remaining;
        break;
      }
      rank -= cnt;
    }
  }
  return seq;
}

std::string to_decimal(const BigRat& q, int digits) {
  BigInt scale = 1;
  for (int i = 0; i < digits; ++i) scale *= 10;
  BigRat scaled = q * scale;
  BigInt twice_num = 2 * scaled.get_num();
  BigInt rounded = (twice_num + (scaled >= 0 ? scaled.get_den() : -scaled.get_den())) /
                   (2 * scaled.get_den());
  bool neg = rounded < 0;
  if (neg) rounded = -rounded;
  std::string s = rounded.get_str();
  if (static_cast<int>(s.size()) <= digits) s.insert(0, digits + 1 - s.size(), '0');
  if (digits > 0) s.insert(s.size() - digits, ".");
  return (neg ? "-" : "") + s;
}

}  // namespace mcbits
