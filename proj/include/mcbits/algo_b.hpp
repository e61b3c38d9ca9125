#pragma once

#include <cstdint>
#include <functional>

#include "mcbits/extractors.hpp"

namespace mcbits {

// Window size for state i's k-th buffer fill (k starts at 1). Must return a
// positive value.
using WindowSchedule = std::function<std::int64_t(int state, std::int64_t k)>;

WindowSchedule constant_window(std::int64_t w);
WindowSchedule per_state_window(std::vector<std::int64_t> w);

// Streaming extraction with one buffer per state. Each incoming symbol is
// appended to the buffer of the state it was emitted from; a buffer is
// extracted and cleared only when it is full AND the chain has just arrived
// at its state. Residual buffer contents are never flushed.
class StreamExtractor {
 public:
  StreamExtractor(int n, Extractor psi, WindowSchedule schedule);

  // Feeds one symbol; returns the bits emitted by this step (often empty).
  // The first symbol only establishes the current state.
  BitString push(Symbol s);

  struct Summary {
    std::int64_t symbols_consumed = 0;
    std::int64_t bits_emitted = 0;
    std::vector<std::int64_t> windows_filled;   // completed windows per state
    std::vector<std::int64_t> residual_sizes;   // discarded buffer lengths
  };

  // Reports counters and discards the buffers.
  Summary finalize();

  std::int64_t buffer_size(int state) const;
  std::int64_t window_size(int state) const;  // current window for that state
  bool started() const { return started_; }

 private:
  int n_;
  Extractor psi_;
  WindowSchedule schedule_;
  std::vector<StateSeq> buffers_;
  std::vector<std::int64_t> window_index_;
  Symbol current_ = 0;
  bool started_ = false;
  std::int64_t symbols_ = 0;
  std::int64_t bits_ = 0;
};

// Feeds a whole sequence through a fresh stream and concatenates the
// emissions.
BitString algorithm_b(const StateSeq& x, int n, const Extractor& psi,
                      const WindowSchedule& schedule);

}  // namespace mcbits
