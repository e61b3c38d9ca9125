#include "mcbits/markov.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

namespace mcbits {

std::size_t ExitSequences::total_symbols() const {
  std::size_t n = 1;
  for (const auto& lane : lanes) n += lane.size();
  return n;
}

ExitSequences decompose(const StateSeq& x, int n) {
  if (x.empty()) throw std::invalid_argument("decompose: empty trajectory");
  check_sequence(x, n);
  ExitSequences e;
  e.start = x.front();
  e.lanes.assign(static_cast<std::size_t>(n), {});
  for (std::size_t j = 0; j + 1 < x.size(); ++j)
    e.lanes[static_cast<std::size_t>(x[j])].push_back(x[j + 1]);
  return e;
}

namespace {

// The complete walk: start at e.start, always consume the head of the
// current state's lane. Returns the walk; feasible iff it used every lane
// symbol.
StateSeq walk(const ExitSequences& e, bool& feasible) {
  StateSeq seq;
  seq.reserve(e.total_symbols());
  std::vector<std::size_t> head(e.lanes.size(), 0);
  Symbol cur = e.start;
  seq.push_back(cur);
  std::size_t consumed = 0;
  while (head[static_cast<std::size_t>(cur)] < e.lanes[static_cast<std::size_t>(cur)].size()) {
    cur = e.lanes[static_cast<std::size_t>(cur)][head[static_cast<std::size_t>(cur)]++];
    seq.push_back(cur);
    ++consumed;
  }
  feasible = consumed + 1 == e.total_symbols();
  return seq;
}

}  // namespace

StateSeq reconstruct(const ExitSequences& e) {
  if (e.lanes.empty()) throw std::invalid_argument("reconstruct: no lanes");
  if (e.start < 0 || e.start >= e.states())
    throw std::invalid_argument("reconstruct: start state out of range");
  bool feasible = false;
  StateSeq seq = walk(e, feasible);
  if (!feasible) throw infeasible_error("exit sequences admit no trajectory");
  return seq;
}

std::optional<Symbol> feasible_end(const ExitSequences& e) {
  if (e.lanes.empty() || e.start < 0 || e.start >= e.states()) return std::nullopt;
  bool feasible = false;
  StateSeq seq = walk(e, feasible);
  if (!feasible) return std::nullopt;
  return seq.back();
}

bool is_feasible(const ExitSequences& e) { return feasible_end(e).has_value(); }

ExitSequences tail_fixed_permute(const ExitSequences& e, int lane, const std::vector<int>& perm,
                                 bool tail_fixed) {
  if (lane < 0 || lane >= e.states()) throw std::invalid_argument("permute: lane out of range");
  const StateSeq& old = e.lanes[static_cast<std::size_t>(lane)];
  if (perm.size() != old.size()) throw std::invalid_argument("permute: size mismatch");
  std::vector<char> seen(perm.size(), 0);
  for (int p : perm) {
    if (p < 0 || p >= static_cast<int>(perm.size()) || seen[static_cast<std::size_t>(p)])
      throw std::invalid_argument("permute: not a permutation");
    seen[static_cast<std::size_t>(p)] = 1;
  }
  if (tail_fixed && !perm.empty() && perm.back() != static_cast<int>(perm.size()) - 1)
    throw std::invalid_argument("permute: tail-fixed permutation must keep the last element");

  ExitSequences out = e;
  StateSeq& dst = out.lanes[static_cast<std::size_t>(lane)];
  for (std::size_t t = 0; t < perm.size(); ++t) dst[t] = old[static_cast<std::size_t>(perm[t])];
  return out;
}

ChainModel::ChainModel(Alphabet alphabet, std::vector<BigRat> rows)
    : alphabet_(std::move(alphabet)), p_(std::move(rows)) {
  const int n = alphabet_.n;
  if (p_.size() != static_cast<std::size_t>(n) * n)
    throw std::invalid_argument("transition matrix has wrong shape");
  for (int i = 0; i < n; ++i) {
    BigRat sum = 0;
    for (int j = 0; j < n; ++j) {
      const BigRat& v = p(i, j);
      if (v < 0 || v > 1) throw std::invalid_argument("transition probability out of [0,1]");
      sum += v;
    }
    if (sum != 1) throw std::invalid_argument("transition matrix row does not sum to 1");
  }
  pd_.reserve(p_.size());
  for (const auto& q : p_) pd_.push_back(q.get_d());
}

ChainModel ChainModel::uniform(int n) {
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back("s" + std::to_string(i + 1));
  std::vector<BigRat> rows(static_cast<std::size_t>(n) * n, BigRat(1, n));
  return ChainModel(Alphabet(std::move(names)), std::move(rows));
}

namespace {

BigRat parse_probability(const std::string& tok) {
  if (tok.find('/') != std::string::npos) {
    BigRat q(tok, 10);
    q.canonicalize();
    return q;
  }
  const auto dot = tok.find('.');
  if (dot == std::string::npos) return BigRat(BigInt(tok, 10));
  std::string digits = tok.substr(0, dot) + tok.substr(dot + 1);
  if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
    throw std::invalid_argument("bad probability token: " + tok);
  BigInt den = 1;
  for (std::size_t i = dot + 1; i < tok.size(); ++i) den *= 10;
  BigRat q(BigInt(digits, 10), den);
  q.canonicalize();
  return q;
}

}  // namespace

ChainModel ChainModel::parse(std::istream& in, bool normalize) {
  std::vector<std::string> names;
  std::vector<std::vector<BigRat>> rows;
  std::string start_name;

  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;
    if (key == "states") {
      std::string tok;
      while (ls >> tok) names.push_back(tok);
    } else if (key == "row") {
      std::vector<BigRat> row;
      std::string tok;
      while (ls >> tok) row.push_back(parse_probability(tok));
      rows.push_back(std::move(row));
    } else if (key == "start") {
      if (!(ls >> start_name)) throw std::invalid_argument("chain spec: start needs a state name");
    } else {
      throw std::invalid_argument("chain spec: unknown directive '" + key + "'");
    }
  }
  if (names.empty()) throw std::invalid_argument("chain spec: missing states line");
  const int n = static_cast<int>(names.size());
  if (static_cast<int>(rows.size()) != n)
    throw std::invalid_argument("chain spec: expected one row per state");

  std::vector<BigRat> flat;
  flat.reserve(static_cast<std::size_t>(n) * n);
  for (auto& row : rows) {
    if (static_cast<int>(row.size()) != n)
      throw std::invalid_argument("chain spec: row has wrong number of entries");
    BigRat sum = 0;
    for (const auto& v : row) sum += v;
    if (sum <= 0) throw std::invalid_argument("chain spec: row sums to zero");
    if (sum != 1) {
      BigRat err = sum - 1;
      if (err < 0) err = -err;
      if (!normalize && err > BigRat(1, 1000000000))
        throw std::invalid_argument("chain spec: row sum differs from 1; pass normalize to rescale");
      for (auto& v : row) v /= sum;
    }
    for (auto& v : row) flat.push_back(std::move(v));
  }

  Alphabet alphabet(std::move(names));
  const int start_idx = start_name.empty() ? -1 : alphabet.find(start_name);
  if (!start_name.empty() && start_idx < 0)
    throw std::invalid_argument("chain spec: unknown start state '" + start_name + "'");
  ChainModel m(std::move(alphabet), std::move(flat));
  if (start_idx >= 0) m.set_start(start_idx);
  return m;
}

ChainModel ChainModel::load_file(const std::string& path, bool normalize) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open chain spec: " + path);
  return parse(in, normalize);
}

void ChainModel::set_start(Symbol s) {
  if (s < 0 || s >= states()) throw std::invalid_argument("start state out of range");
  std::vector<BigRat> dist(static_cast<std::size_t>(states()), 0);
  dist[static_cast<std::size_t>(s)] = 1;
  start_ = std::move(dist);
}

void ChainModel::set_start(std::vector<BigRat> dist) {
  if (dist.size() != static_cast<std::size_t>(states()))
    throw std::invalid_argument("start distribution has wrong size");
  BigRat sum = 0;
  for (const auto& v : dist) {
    if (v < 0) throw std::invalid_argument("start distribution has negative entry");
    sum += v;
  }
  if (sum != 1) throw std::invalid_argument("start distribution does not sum to 1");
  start_ = std::move(dist);
}

BigRat exact_probability(const StateSeq& x, const ChainModel& m) {
  if (x.empty()) throw std::invalid_argument("exact_probability: empty trajectory");
  check_sequence(x, m.states());
  if (!m.start()) throw std::logic_error("exact_probability: model has no start distribution");
  BigRat prob = (*m.start())[static_cast<std::size_t>(x.front())];
  for (std::size_t t = 0; t + 1 < x.size(); ++t) prob *= m.p(x[t], x[t + 1]);
  return prob;
}

StateSeq sample(const ChainModel& m, std::size_t length, std::uint64_t seed) {
  if (length == 0) return {};
  const int n = m.states();
  std::mt19937_64 gen(seed);
  auto uniform01 = [&gen] {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
  };
  auto pick = [n](double u, auto&& weight) {
    double acc = 0;
    for (int j = 0; j < n; ++j) {
      acc += weight(j);
      if (u < acc) return j;
    }
    return n - 1;
  };

  StateSeq x;
  x.reserve(length);
  Symbol cur;
  if (m.start()) {
    const auto& dist = *m.start();
    cur = pick(uniform01(), [&dist](int j) { return dist[static_cast<std::size_t>(j)].get_d(); });
  } else {
    cur = static_cast<Symbol>(gen() % static_cast<std::uint64_t>(n));
  }
  x.push_back(cur);
  while (x.size() < length) {
    cur = pick(uniform01(), [&m, cur](int j) { return m.pd(cur, j); });
    x.push_back(cur);
  }
  return x;
}

namespace {

void reachability(const ChainModel& m, bool transpose, std::vector<char>& seen) {
  const int n = m.states();
  seen.assign(static_cast<std::size_t>(n), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int w = 0; w < n; ++w) {
      const BigRat& edge = transpose ? m.p(w, v) : m.p(v, w);
      if (edge > 0 && !seen[static_cast<std::size_t>(w)]) {
        seen[static_cast<std::size_t>(w)] = 1;
        stack.push_back(w);
      }
    }
  }
}

}  // namespace

std::vector<BigRat> stationary(const ChainModel& m) {
  const int n = m.states();
  std::vector<char> fwd, bwd;
  reachability(m, false, fwd);
  reachability(m, true, bwd);
  for (int i = 0; i < n; ++i)
    if (!fwd[static_cast<std::size_t>(i)] || !bwd[static_cast<std::size_t>(i)])
      throw not_irreducible_error("chain is not irreducible");

  // Solve u(P - I) = 0 with sum(u) = 1: columns of P^T - I, last equation
  // replaced by the normalization row. Exact Gaussian elimination.
  const int cols = n + 1;
  std::vector<BigRat> a(static_cast<std::size_t>(n) * cols, 0);
  auto at = [&a, cols](int r, int c) -> BigRat& {
    return a[static_cast<std::size_t>(r) * cols + c];
  };
  for (int r = 0; r + 1 < n; ++r)
    for (int c = 0; c < n; ++c) at(r, c) = m.p(c, r) - BigRat(r == c ? 1 : 0);
  for (int c = 0; c < n; ++c) at(n - 1, c) = 1;
  at(n - 1, n) = 1;

  for (int col = 0; col < n; ++col) {
    int pivot = -1;
    for (int r = col; r < n; ++r)
      if (at(r, col) != 0) {
        pivot = r;
        break;
      }
    if (pivot < 0) throw std::logic_error("stationary: singular system for irreducible chain");
    for (int c = 0; c < cols; ++c) std::swap(at(col, c), at(pivot, c));
    BigRat inv = at(col, col);
    for (int c = col; c < cols; ++c) at(col, c) /= inv;
    for (int r = 0; r < n; ++r) {
      if (r == col || at(r, col) == 0) continue;
      BigRat f = at(r, col);
      for (int c = col; c < cols; ++c) at(r, c) -= f * at(col, c);
    }
  }
  std::vector<BigRat> u(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) u[static_cast<std::size_t>(i)] = at(i, n);
  return u;
}

double entropy_rate(const ChainModel& m) {
  const int n = m.states();
  std::vector<BigRat> u = stationary(m);
  double rate = 0;
  for (int i = 0; i < n; ++i) {
    double h = 0;
    for (int j = 0; j < n; ++j) {
      double p = m.pd(i, j);
      if (p > 0) h -= p * std::log2(p);
    }
    rate += u[static_cast<std::size_t>(i)].get_d() * h;
  }
  return rate;
}

}  // namespace mcbits
