#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mcbits/bigint.hpp"
#include "mcbits/types.hpp"

namespace mcbits {

struct infeasible_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct not_irreducible_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The exit sequences of a trajectory: lanes[i] lists the states visited
// immediately after each visit to state i, in trajectory order. Together
// with the start state this determines the trajectory uniquely.
struct ExitSequences {
  Symbol start = 0;
  std::vector<StateSeq> lanes;

  int states() const { return static_cast<int>(lanes.size()); }
  std::size_t total_symbols() const;  // trajectory length this reconstructs to
};

ExitSequences decompose(const StateSeq& x, int n);

// Rebuilds the trajectory by repeatedly consuming the head of the current
// state's lane. Throws infeasible_error if symbols remain unconsumed when
// the walk stops.
StateSeq reconstruct(const ExitSequences& e);

// Ending state of the complete walk, or nullopt when the walk cannot
// consume every lane symbol.
std::optional<Symbol> feasible_end(const ExitSequences& e);
bool is_feasible(const ExitSequences& e);

// Applies perm to one lane: new_lane[t] = lane[perm[t]]. With tail_fixed
// set, perm must keep the last position in place. No feasibility check.
ExitSequences tail_fixed_permute(const ExitSequences& e, int lane, const std::vector<int>& perm,
                                 bool tail_fixed = true);

class ChainModel {
 public:
  // rows: row-major n*n transition probabilities; each row must sum to
  // exactly 1.
  ChainModel(Alphabet alphabet, std::vector<BigRat> rows);

  static ChainModel uniform(int n);

  // Text format, '#' comments:
  //   states <name> <name> ...
  //   row <p> <p> ...            (one line per state; decimal or "p/q")
  //   start <name>               (optional)
  // With normalize set, rows are rescaled by their exact sum; otherwise a
  // row sum may deviate from 1 by at most 1e-9 (and is still rescaled
  // exactly, so the stored matrix is always stochastic).
  static ChainModel parse(std::istream& in, bool normalize = false);
  static ChainModel load_file(const std::string& path, bool normalize = false);

  int states() const { return alphabet_.n; }
  const Alphabet& alphabet() const { return alphabet_; }
  const BigRat& p(int i, int j) const { return p_[static_cast<std::size_t>(i) * alphabet_.n + j]; }
  double pd(int i, int j) const { return pd_[static_cast<std::size_t>(i) * alphabet_.n + j]; }

  void set_start(Symbol s);
  void set_start(std::vector<BigRat> dist);
  const std::optional<std::vector<BigRat>>& start() const { return start_; }

 private:
  Alphabet alphabet_;
  std::vector<BigRat> p_;
  std::vector<double> pd_;
  std::optional<std::vector<BigRat>> start_;
};

// P[x] = P[x_1] * prod P[x_{t+1} | x_t], with P[x_1] taken from the model's
// start distribution. Throws std::logic_error when no start is set.
BigRat exact_probability(const StateSeq& x, const ChainModel& m);

// Deterministic seeded trajectory. Starts from the model's start
// distribution when set, else uniformly.
StateSeq sample(const ChainModel& m, std::size_t length, std::uint64_t seed);

// Unique stationary distribution of an irreducible chain, solved exactly.
std::vector<BigRat> stationary(const ChainModel& m);

// Entropy rate in bits per symbol: sum_i u_i H(row i).
double entropy_rate(const ChainModel& m);

}  // namespace mcbits
