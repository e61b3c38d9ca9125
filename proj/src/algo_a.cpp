#include "mcbits/algo_a.hpp"

#include <numeric>

namespace mcbits {

namespace {

// Lane i loses its final symbol unless it belongs to the ending state.
StateSeq trimmed_lane(const ExitSequences& e, int lane, Symbol ending, const AlgoAOptions& opts) {
  StateSeq lane_seq = e.lanes[static_cast<std::size_t>(lane)];
  const bool keep_whole = (lane == ending) && !opts.trim_final_lane;
  if (!keep_whole && !lane_seq.empty()) lane_seq.pop_back();
  return lane_seq;
}

}  // namespace

BitString algorithm_a(const StateSeq& x, int n, const Extractor& psi, AlgoAOptions opts) {
  if (x.empty()) throw std::invalid_argument("algorithm_a: empty trajectory");
  const ExitSequences e = decompose(x, n);
  const Symbol ending = x.back();
  BitString out;
  for (int i = 0; i < n; ++i) out += psi(trimmed_lane(e, i, ending, opts));
  return out;
}

SegmentRule whole_segment_rule() {
  return [](std::int64_t len) { return std::vector<std::int64_t>{len}; };
}

SegmentRule halves_segment_rule() {
  return [](std::int64_t len) {
    return std::vector<std::int64_t>{len / 2, len - len / 2};
  };
}

BitString algorithm_a_segmented(const StateSeq& x, int n, const Extractor& psi,
                                const SegmentRule& rule, AlgoAOptions opts) {
  if (x.empty()) throw std::invalid_argument("algorithm_a_segmented: empty trajectory");
  const ExitSequences e = decompose(x, n);
  const Symbol ending = x.back();
  BitString out;
  for (int i = 0; i < n; ++i) {
    const StateSeq lane = trimmed_lane(e, i, ending, opts);
    const auto parts = rule(static_cast<std::int64_t>(lane.size()));
    const std::int64_t sum = std::accumulate(parts.begin(), parts.end(), std::int64_t{0});
    if (sum != static_cast<std::int64_t>(lane.size()))
      throw std::invalid_argument("segment rule: partition does not sum to the lane length");
    std::size_t pos = 0;
    for (std::int64_t part : parts) {
      if (part < 0) throw std::invalid_argument("segment rule: negative segment length");
      StateSeq segment(lane.begin() + static_cast<std::ptrdiff_t>(pos),
                       lane.begin() + static_cast<std::ptrdiff_t>(pos + part));
      out += psi(segment);
      pos += static_cast<std::size_t>(part);
    }
  }
  return out;
}

BitString algorithm_a_split_stream(const StateSeq& x, int n, const Extractor& psi,
                                   std::int64_t threshold, AlgoAOptions opts) {
  if (x.empty()) throw std::invalid_argument("algorithm_a_split_stream: empty trajectory");
  if (threshold < 1) throw std::invalid_argument("algorithm_a_split_stream: threshold must be >= 1");
  const Symbol anchor = x.front();

  BitString out;
  std::size_t begin = 0;
  while (true) {
    // First return to the anchor state more than threshold symbols into the
    // current piece; the cut symbol is shared by both pieces.
    std::size_t cut = begin + static_cast<std::size_t>(threshold);
    while (cut < x.size() && x[cut] != anchor) ++cut;
    const std::size_t end = cut < x.size() ? cut : x.size() - 1;
    StateSeq piece(x.begin() + static_cast<std::ptrdiff_t>(begin),
                   x.begin() + static_cast<std::ptrdiff_t>(end + 1));
    out += algorithm_a(piece, n, psi, opts);
    if (cut >= x.size() || end + 1 == x.size()) break;
    begin = end;
  }
  return out;
}

}  // namespace mcbits
