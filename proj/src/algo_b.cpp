#include "mcbits/algo_b.hpp"

#include <stdexcept>

namespace mcbits {

WindowSchedule constant_window(std::int64_t w) {
  if (w < 1) throw std::invalid_argument("window size must be >= 1");
  return [w](int, std::int64_t) { return w; };
}

WindowSchedule per_state_window(std::vector<std::int64_t> w) {
  for (auto v : w)
    if (v < 1) throw std::invalid_argument("window size must be >= 1");
  return [w = std::move(w)](int state, std::int64_t) { return w[static_cast<std::size_t>(state)]; };
}

StreamExtractor::StreamExtractor(int n, Extractor psi, WindowSchedule schedule)
    : n_(n),
      psi_(psi),
      schedule_(std::move(schedule)),
      buffers_(static_cast<std::size_t>(n)),
      window_index_(static_cast<std::size_t>(n), 1) {
  if (n < 1) throw std::invalid_argument("StreamExtractor: need at least one state");
  if (!schedule_) throw std::invalid_argument("StreamExtractor: missing window schedule");
}

BitString StreamExtractor::push(Symbol s) {
  if (s < 0 || s >= n_) throw std::invalid_argument("push: symbol out of range");
  ++symbols_;
  if (!started_) {
    started_ = true;
    current_ = s;
    return {};
  }
  buffers_[static_cast<std::size_t>(current_)].push_back(s);

  // Extract only on arrival at the buffer's own state; a window that fills
  // while the chain is elsewhere waits for the next visit.
  BitString out;
  auto& arrived = buffers_[static_cast<std::size_t>(s)];
  auto& k = window_index_[static_cast<std::size_t>(s)];
  if (static_cast<std::int64_t>(arrived.size()) >= schedule_(s, k)) {
    out = psi_(arrived);
    arrived.clear();
    ++k;
    bits_ += static_cast<std::int64_t>(out.size());
  }
  current_ = s;
  return out;
}

StreamExtractor::Summary StreamExtractor::finalize() {
  Summary sum;
  sum.symbols_consumed = symbols_;
  sum.bits_emitted = bits_;
  sum.windows_filled.reserve(static_cast<std::size_t>(n_));
  sum.residual_sizes.reserve(static_cast<std::size_t>(n_));
  for (int i = 0; i < n_; ++i) {
    sum.windows_filled.push_back(window_index_[static_cast<std::size_t>(i)] - 1);
    sum.residual_sizes.push_back(
        static_cast<std::int64_t>(buffers_[static_cast<std::size_t>(i)].size()));
  }
  for (auto& b : buffers_) b.clear();
  return sum;
}

std::int64_t StreamExtractor::buffer_size(int state) const {
  return static_cast<std::int64_t>(buffers_[static_cast<std::size_t>(state)].size());
}

std::int64_t StreamExtractor::window_size(int state) const {
  return schedule_(state, window_index_[static_cast<std::size_t>(state)]);
}

BitString algorithm_b(const StateSeq& x, int n, const Extractor& psi,
                      const WindowSchedule& schedule) {
  StreamExtractor stream(n, psi, schedule);
  BitString out;
  for (Symbol s : x) out += stream.push(s);
  return out;
}

}  // namespace mcbits
