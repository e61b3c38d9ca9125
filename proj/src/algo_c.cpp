#include "mcbits/algo_c.hpp"

#include <algorithm>

namespace mcbits {

TailSplit tail_split(const ExitSequences& e) {
  TailSplit ts;
  ts.last.reserve(e.lanes.size());
  ts.trimmed.reserve(e.lanes.size());
  for (const StateSeq& lane : e.lanes) {
    if (lane.empty()) {
      ts.last.push_back(kNoTail);
      ts.trimmed.emplace_back();
    } else {
      ts.last.push_back(lane.back());
      ts.trimmed.emplace_back(lane.begin(), lane.end() - 1);
    }
  }
  return ts;
}

namespace {

struct ClassInfo {
  BigInt size = 0;
  BigInt rank = 0;
};

// Per-lane data shared by the tail-vector enumeration.
struct LaneData {
  std::vector<std::int64_t> counts;        // symbol counts of the lane
  std::vector<Symbol> tail_candidates;     // symbols present, ascending
  std::vector<BigInt> tail_factor;         // arrangements with that final symbol
};

// Arrangements of the lane multiset whose final symbol is w.
BigInt arrangements_with_tail(std::vector<std::int64_t> counts, Symbol w) {
  --counts[static_cast<std::size_t>(w)];
  return multinomial(counts);
}

// Lane with the first occurrence of w moved to the end; feasibility of the
// whole tail vector reduces to one walk over these rotations.
StateSeq rotate_tail(const StateSeq& lane, Symbol w) {
  StateSeq out;
  out.reserve(lane.size());
  bool moved = false;
  for (Symbol s : lane) {
    if (!moved && s == w) {
      moved = true;
      continue;
    }
    out.push_back(s);
  }
  out.push_back(w);
  return out;
}

ClassInfo analyze_class(const StateSeq& x, int n, bool use_product_tree);

}  // namespace

BigInt class_size(const StateSeq& x, int n) { return analyze_class(x, n, false).size; }

BigInt class_rank(const StateSeq& x, int n) { return analyze_class(x, n, false).rank; }

BigInt class_rank_fast(const StateSeq& x, int n) { return analyze_class(x, n, true).rank; }

BitString algorithm_c(const StateSeq& x, int n) {
  const ClassInfo info = analyze_class(x, n, false);
  return assign_bits(info.rank, info.size);
}

namespace {

// Rank of the trimmed lanes among all tuples of lane arrangements, by the
// direct suffix-count scan. suffix_arrangements[i] = product over lanes
// j > i of the number of arrangements of lane j.
BigInt in_class_rank_direct(const TailSplit& ts, const std::vector<BigInt>& suffix_arrangements) {
  BigInt rank = 0;
  for (std::size_t i = 0; i < ts.trimmed.size(); ++i)
    rank += multiset_rank(ts.trimmed[i]) * suffix_arrangements[i + 1];
  return rank;
}

// Same rank as a product tree over per-position rational contributions of
// the concatenated trimmed lanes. Each position carries lambda (fraction of
// suffix arrangements with a smaller symbol here) and rho (suffix
// arrangement growth); block values combine pairwise.
BigInt in_class_rank_tree(const TailSplit& ts, int n) {
  struct Term {
    BigRat lambda_rho;  // contribution of the block's positions
    BigRat rho;         // product of the block's rho values
  };
  std::vector<Term> terms;
  std::vector<std::int64_t> c(static_cast<std::size_t>(n));
  for (const StateSeq& seg : ts.trimmed) {
    std::fill(c.begin(), c.end(), 0);
    const std::size_t len = seg.size();
    std::vector<Term> lane_terms(len);
    for (std::size_t back = 0; back < len; ++back) {
      const std::size_t t = len - 1 - back;
      const Symbol s = seg[t];
      ++c[static_cast<std::size_t>(s)];
      const std::int64_t suffix_len = static_cast<std::int64_t>(back) + 1;
      std::int64_t smaller = 0;
      for (Symbol w = 0; w < s; ++w) smaller += c[static_cast<std::size_t>(w)];
      BigRat lambda(smaller, suffix_len);
      lambda.canonicalize();
      BigRat rho(suffix_len, c[static_cast<std::size_t>(s)]);
      rho.canonicalize();
      lane_terms[t] = Term{lambda * rho, rho};
    }
    terms.insert(terms.end(), lane_terms.begin(), lane_terms.end());
  }

  while (terms.size() > 1) {
    std::vector<Term> next;
    next.reserve(terms.size() / 2 + 1);
    for (std::size_t i = 0; i + 1 < terms.size(); i += 2)
      next.push_back(Term{terms[i].lambda_rho * terms[i + 1].rho + terms[i + 1].lambda_rho,
                          terms[i].rho * terms[i + 1].rho});
    if (terms.size() % 2 == 1) next.push_back(terms.back());
    terms.swap(next);
  }
  if (terms.empty()) return 0;
  const BigRat& total = terms.front().lambda_rho;
  if (total.get_den() != 1) throw std::logic_error("in-class rank did not reduce to an integer");
  return BigInt(total.get_num());
}

ClassInfo analyze_class(const StateSeq& x, int n, bool use_product_tree) {
  if (x.empty()) throw std::invalid_argument("class analysis: empty trajectory");
  const ExitSequences e = decompose(x, n);
  const TailSplit ts = tail_split(e);

  std::vector<LaneData> lanes(static_cast<std::size_t>(n));
  std::vector<std::size_t> varying;  // lanes with at least one symbol
  for (int i = 0; i < n; ++i) {
    LaneData& ld = lanes[static_cast<std::size_t>(i)];
    ld.counts = symbol_counts(e.lanes[static_cast<std::size_t>(i)], n);
    for (Symbol w = 0; w < n; ++w) {
      if (ld.counts[static_cast<std::size_t>(w)] == 0) continue;
      ld.tail_candidates.push_back(w);
      ld.tail_factor.push_back(arrangements_with_tail(ld.counts, w));
    }
    if (!ld.tail_candidates.empty()) varying.push_back(static_cast<std::size_t>(i));
  }

  // Enumerate candidate tail vectors in lexicographic order, checking each
  // with one walk over the rotated lanes.
  ClassInfo info;
  std::vector<std::size_t> choice(varying.size(), 0);
  ExitSequences candidate;
  candidate.start = e.start;
  candidate.lanes = e.lanes;
  bool before_own = true;
  while (true) {
    bool is_own = true;
    for (std::size_t v = 0; v < varying.size(); ++v) {
      const std::size_t i = varying[v];
      const Symbol w = lanes[i].tail_candidates[choice[v]];
      candidate.lanes[i] = rotate_tail(e.lanes[i], w);
      if (w != ts.last[i]) is_own = false;
    }
    if (is_own) before_own = false;
    if (is_feasible(candidate)) {
      BigInt weight = 1;
      for (std::size_t v = 0; v < varying.size(); ++v)
        weight *= lanes[varying[v]].tail_factor[choice[v]];
      info.size += weight;
      if (before_own) info.rank += weight;
    }

    bool rolled_over = true;
    for (std::size_t pos = varying.size(); pos-- > 0;) {
      if (++choice[pos] < lanes[varying[pos]].tail_candidates.size()) {
        rolled_over = false;
        break;
      }
      choice[pos] = 0;
    }
    if (rolled_over) break;
  }

  if (use_product_tree) {
    info.rank += in_class_rank_tree(ts, n);
    return info;
  }
  std::vector<BigInt> suffix_arrangements(static_cast<std::size_t>(n) + 1);
  suffix_arrangements[static_cast<std::size_t>(n)] = 1;
  for (int i = n; i-- > 0;) {
    BigInt own = 1;
    if (ts.last[static_cast<std::size_t>(i)] != kNoTail)
      own = arrangements_with_tail(lanes[static_cast<std::size_t>(i)].counts,
                                   ts.last[static_cast<std::size_t>(i)]);
    suffix_arrangements[static_cast<std::size_t>(i)] =
        own * suffix_arrangements[static_cast<std::size_t>(i) + 1];
  }
  info.rank += in_class_rank_direct(ts, suffix_arrangements);
  return info;
}

}  // namespace

}  // namespace mcbits
