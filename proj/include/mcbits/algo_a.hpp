#pragma once

#include <cstdint>
#include <functional>

#include "mcbits/extractors.hpp"
#include "mcbits/markov.hpp"

namespace mcbits {

struct AlgoAOptions {
  // Also drop the final symbol of the ending state's lane. The default keeps
  // that lane whole, which extracts slightly more.
  bool trim_final_lane = false;
};

// Splits the trajectory into exit sequences, drops the last symbol of every
// lane except the one belonging to the final state, applies the extractor
// per lane, and concatenates in state order.
BitString algorithm_a(const StateSeq& x, int n, const Extractor& psi, AlgoAOptions opts = {});

// Maps a lane length to segment lengths; must depend on the length only.
using SegmentRule = std::function<std::vector<std::int64_t>(std::int64_t)>;

SegmentRule whole_segment_rule();
SegmentRule halves_segment_rule();

// Same trimming as algorithm_a, but each lane is cut into rule(length)
// segments and the extractor runs on every segment separately.
BitString algorithm_a_segmented(const StateSeq& x, int n, const Extractor& psi,
                                const SegmentRule& rule, AlgoAOptions opts = {});

// Cuts the trajectory at the first return to its initial state after each
// threshold symbols (the cut symbol belongs to both pieces), runs
// algorithm_a on every piece, and concatenates.
BitString algorithm_a_split_stream(const StateSeq& x, int n, const Extractor& psi,
                                   std::int64_t threshold, AlgoAOptions opts = {});

}  // namespace mcbits
