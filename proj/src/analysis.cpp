#include "mcbits/analysis.hpp"

#include <cmath>
#include <cstring>
#include <thread>

#include "mcbits/coding.hpp"

namespace mcbits {

namespace {

// Depth-first enumeration of all trajectories extending `prefix`, with the
// probability of each maintained incrementally.
void enumerate_from(const ChainModel& m, int length, const AlgorithmFn& f, StateSeq& prefix,
                    BigRat prob, EnumerationReport& report) {
  if (static_cast<int>(prefix.size()) == length) {
    const BitString y = f(prefix);
    report.probability[y] += prob;
    report.total += prob;
    report.expected_length += prob * static_cast<unsigned long>(y.size());
    ++report.sequences;
    return;
  }
  const Symbol cur = prefix.back();
  for (Symbol next = 0; next < m.states(); ++next) {
    const BigRat& step = m.p(cur, next);
    if (step == 0) continue;
    prefix.push_back(next);
    enumerate_from(m, length, f, prefix, prob * step, report);
    prefix.pop_back();
  }
}

void merge_reports(EnumerationReport& into, const EnumerationReport& from) {
  for (const auto& [y, p] : from.probability) into.probability[y] += p;
  into.total += from.total;
  into.expected_length += from.expected_length;
  into.sequences += from.sequences;
}

// A positive probability at length l > 0 must be shared by all 2^l strings
// of that length; anything else is a bias.
void check_uniform(EnumerationReport& report) {
  report.uniform = true;
  for (auto it = report.probability.begin(); it != report.probability.end();) {
    const std::size_t len = it->first.size();
    const auto hi = report.probability.upper_bound(BitString(len, '1'));
    const BigRat& reference = it->second;
    std::uint64_t present = 0;
    bool equal = true, nonzero = false;
    for (auto jt = it; jt != hi; ++jt) {
      ++present;
      if (jt->second != reference) equal = false;
      if (jt->second != 0) nonzero = true;
    }
    if (len > 0 && nonzero) {
      const std::uint64_t needed = len < 63 ? (std::uint64_t{1} << len) : 0;
      if (!equal || present != needed) report.uniform = false;
    }
    it = hi;
  }
}

}  // namespace

EnumerationReport enumerate_distribution(const ChainModel& m, int length, Symbol start,
                                         const AlgorithmFn& f, std::uint64_t budget,
                                         int threads) {
  if (length < 1) throw std::invalid_argument("enumerate_distribution: length must be >= 1");
  if (start < 0 || start >= m.states())
    throw std::invalid_argument("enumerate_distribution: start state out of range");
  BigInt space;
  mpz_ui_pow_ui(space.get_mpz_t(), static_cast<unsigned long>(m.states()),
                static_cast<unsigned long>(length - 1));
  if (space > BigInt(static_cast<unsigned long>(budget)))
    throw budget_error("enumeration space exceeds budget");

  EnumerationReport report;
  if (threads <= 1 || length < 3) {
    StateSeq prefix{start};
    enumerate_from(m, length, f, prefix, BigRat(1), report);
  } else {
    // Partition by the first two transitions and farm the blocks out
    // round-robin; merging per-thread reports keeps the result exact and
    // deterministic.
    struct Block {
      StateSeq prefix;
      BigRat prob;
    };
    std::vector<Block> blocks;
    for (Symbol a = 0; a < m.states(); ++a) {
      if (m.p(start, a) == 0) continue;
      for (Symbol b = 0; b < m.states(); ++b) {
        if (m.p(a, b) == 0) continue;
        blocks.push_back(Block{StateSeq{start, a, b}, m.p(start, a) * m.p(a, b)});
      }
    }
    const int workers = std::min<int>(threads, static_cast<int>(blocks.size()));
    std::vector<EnumerationReport> partial(blocks.size());
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = static_cast<std::size_t>(w); i < blocks.size();
             i += static_cast<std::size_t>(workers)) {
          StateSeq prefix = blocks[i].prefix;
          enumerate_from(m, length, f, prefix, blocks[i].prob, partial[i]);
        }
      });
    }
    for (auto& t : pool) t.join();
    for (const auto& part : partial) merge_reports(report, part);
  }
  check_uniform(report);
  return report;
}

CountingReport verify_counting_condition(int n, int length, const AlgorithmFn& f) {
  if (n < 1 || length < 1) throw std::invalid_argument("verify_counting_condition: bad shape");

  // Group key: start symbol plus flattened exit-count matrix.
  using Key = std::vector<std::int64_t>;
  std::map<Key, std::map<BitString, std::uint64_t, LenLexLess>> groups;

  StateSeq x(static_cast<std::size_t>(length), 0);
  CountingReport report;
  while (true) {
    Key key(static_cast<std::size_t>(n) * n + 1, 0);
    key[0] = x[0];
    for (std::size_t j = 0; j + 1 < x.size(); ++j)
      ++key[1 + static_cast<std::size_t>(x[j]) * n + x[j + 1]];
    ++groups[std::move(key)][f(x)];
    ++report.sequences;

    std::size_t pos = x.size();
    bool done = true;
    while (pos-- > 0) {
      if (++x[pos] < n) {
        done = false;
        break;
      }
      x[pos] = 0;
    }
    if (done) break;
  }

  report.groups = groups.size();
  for (const auto& [key, outputs] : groups) {
    for (auto it = outputs.begin(); it != outputs.end();) {
      const std::size_t len = it->first.size();
      auto hi = outputs.upper_bound(BitString(len, '1'));
      std::uint64_t reference = it->second;
      std::uint64_t present = 0;
      bool equal = true;
      BitString other;
      std::uint64_t other_count = 0;
      for (auto jt = it; jt != hi; ++jt) {
        ++present;
        if (jt->second != reference && equal) {
          equal = false;
          other = jt->first;
          other_count = jt->second;
        }
      }
      const std::uint64_t needed = len < 63 ? (std::uint64_t{1} << len) : 0;
      if (len > 0 && present != needed) {
        equal = false;
        // Some string of this length was never produced while others were.
        other = BitString(len, '0');
        while (outputs.count(other)) {
          std::size_t b = len;
          while (b-- > 0) {
            if (other[b] == '0') {
              other[b] = '1';
              break;
            }
            other[b] = '0';
          }
        }
        other_count = 0;
      }
      if (!equal && !report.violation) {
        report.pass = false;
        CountingReport::Violation v;
        v.start = static_cast<Symbol>(key[0]);
        v.count_matrix.assign(key.begin() + 1, key.end());
        v.output_a = it->first;
        v.count_a = it->second;
        v.output_b = other;
        v.count_b = other_count;
        report.violation = std::move(v);
      }
      it = hi;
    }
    if (!report.pass) break;
  }
  return report;
}

BigRat window_efficiency(const ChainModel& m, int state, std::int64_t window) {
  if (window < 1) throw std::invalid_argument("window_efficiency: window must be >= 1");
  const int n = m.states();

  // Powers of the row entries up to the window size.
  std::vector<std::vector<BigRat>> powers(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    auto& col = powers[static_cast<std::size_t>(j)];
    col.resize(static_cast<std::size_t>(window) + 1);
    col[0] = 1;
    for (std::int64_t k = 1; k <= window; ++k)
      col[static_cast<std::size_t>(k)] = col[static_cast<std::size_t>(k - 1)] * m.p(state, j);
  }

  // Sum over all compositions of the window into n symbol counts.
  BigRat sum = 0;
  std::vector<std::int64_t> counts(static_cast<std::size_t>(n), 0);
  auto recurse = [&](auto&& self, int j, std::int64_t remaining) -> void {
    if (j == n - 1) {
      counts[static_cast<std::size_t>(j)] = remaining;
      BigRat term(alpha(multinomial(counts)));
      for (int i = 0; i < n; ++i)
        term *= powers[static_cast<std::size_t>(i)][static_cast<std::size_t>(
            counts[static_cast<std::size_t>(i)])];
      sum += term;
      return;
    }
    for (std::int64_t k = 0; k <= remaining; ++k) {
      counts[static_cast<std::size_t>(j)] = k;
      self(self, j + 1, remaining - k);
    }
  };
  recurse(recurse, 0, window);
  return sum / BigRat(window);
}

std::vector<EfficiencyPoint> efficiency_curve(const ChainModel& m, std::int64_t window_min,
                                              std::int64_t window_max) {
  if (window_min < 2 || window_max < window_min)
    throw std::invalid_argument("efficiency_curve: bad window range");
  const std::vector<BigRat> u = stationary(m);
  std::vector<EfficiencyPoint> curve;
  for (std::int64_t w = window_min; w <= window_max; ++w) {
    BigRat eta = 0;
    for (int i = 0; i < m.states(); ++i)
      eta += u[static_cast<std::size_t>(i)] * window_efficiency(m, i, w);
    curve.push_back(EfficiencyPoint{w, std::move(eta)});
  }
  return curve;
}

StatReport statistical_suite(const BitString& bits) {
  const std::size_t n = bits.size();
  if (n < 10000) throw std::invalid_argument("statistical_suite: need at least 10^4 bits");
  StatReport rep;
  rep.bits = n;

  std::size_t ones = 0;
  for (char c : bits) ones += (c == '1');
  const double nd = static_cast<double>(n);

  // Monobit frequency.
  const double s_obs =
      std::fabs(2.0 * static_cast<double>(ones) - nd) / std::sqrt(nd);
  rep.monobit_p = std::erfc(s_obs / std::sqrt(2.0));

  // Serial test over overlapping 2-grams (cyclic). With m = 2 the p-value
  // reduces to exp(-delta/2).
  double c1[2] = {static_cast<double>(n - ones), static_cast<double>(ones)};
  double c2[4] = {0, 0, 0, 0};
  for (std::size_t i = 0; i < n; ++i) {
    const int a = bits[i] - '0';
    const int b = bits[(i + 1) % n] - '0';
    c2[2 * a + b] += 1.0;
  }
  double psi2 = 0, psi1 = 0;
  for (double c : c2) psi2 += c * c;
  for (double c : c1) psi1 += c * c;
  psi2 = 4.0 / nd * psi2 - nd;
  psi1 = 2.0 / nd * psi1 - nd;
  const double delta = psi2 - psi1;
  rep.serial_p = std::exp(-delta / 2.0);

  // Runs test, gated on the monobit proportion.
  const double pi = static_cast<double>(ones) / nd;
  if (std::fabs(pi - 0.5) >= 2.0 / std::sqrt(nd)) {
    rep.runs_p = 0.0;
  } else {
    std::size_t runs = 1;
    for (std::size_t i = 0; i + 1 < n; ++i) runs += (bits[i] != bits[i + 1]);
    const double expected = 2.0 * nd * pi * (1.0 - pi);
    rep.runs_p = std::erfc(std::fabs(static_cast<double>(runs) - expected) /
                           (2.0 * std::sqrt(2.0 * nd) * pi * (1.0 - pi)));
  }
  return rep;
}

}  // namespace mcbits
