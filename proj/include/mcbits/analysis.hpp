#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "mcbits/bigint.hpp"
#include "mcbits/markov.hpp"

namespace mcbits {

struct budget_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using AlgorithmFn = std::function<BitString(const StateSeq&)>;

// Shorter strings first, then lexicographic; puts the empty output at the
// front of every report.
struct LenLexLess {
  bool operator()(const BitString& a, const BitString& b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  }
};

struct EnumerationReport {
  std::map<BitString, BigRat, LenLexLess> probability;
  BigRat total = 0;            // must come out exactly 1
  BigRat expected_length = 0;  // exact
  bool uniform = true;         // equal probability within every output length
  std::uint64_t sequences = 0;
};

// Applies f to every length-`length` trajectory with the given start state
// and accumulates exact output probabilities under m. Throws budget_error
// when n^(length-1) exceeds the budget.
EnumerationReport enumerate_distribution(const ChainModel& m, int length, Symbol start,
                                         const AlgorithmFn& f,
                                         std::uint64_t budget = 100000000,
                                         int threads = 1);

// Transition-matrix-free unbiasedness check: groups every length-`length`
// sequence over n symbols by (start state, exit-count matrix) and verifies
// that within each group every output length is hit by all bit strings of
// that length equally often.
struct CountingReport {
  bool pass = true;
  std::uint64_t sequences = 0;
  std::uint64_t groups = 0;
  // First violation: two equal-length outputs with different counts in one
  // group.
  struct Violation {
    Symbol start;
    std::vector<std::int64_t> count_matrix;
    BitString output_a, output_b;
    std::uint64_t count_a = 0, count_b = 0;
  };
  std::optional<Violation> violation;
};

CountingReport verify_counting_condition(int n, int length, const AlgorithmFn& f);

// Limiting bits-per-symbol of the windowed streaming extraction with an
// n-face-coin extractor on each full window, evaluated exactly.
BigRat window_efficiency(const ChainModel& m, int state, std::int64_t window);

struct EfficiencyPoint {
  std::int64_t window = 0;
  BigRat eta;
};

std::vector<EfficiencyPoint> efficiency_curve(const ChainModel& m, std::int64_t window_min,
                                              std::int64_t window_max);

// Monobit, serial (2-gram), and runs tests. Requires at least 10^4 bits.
struct StatReport {
  std::size_t bits = 0;
  double monobit_p = 0;
  double serial_p = 0;
  double runs_p = 0;
  bool pass(double alpha) const {
    return monobit_p >= alpha && serial_p >= alpha && runs_p >= alpha;
  }
};

StatReport statistical_suite(const BitString& bits);

}  // namespace mcbits
