#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <type_traits>
#include <vector>

#include <tbb/parallel_sort.h>

#include "errors.hpp"
#include "parallel.hpp"

namespace augmap {

namespace detail {
template <class S, class = void>
struct summary_of {
  using type = typename S::prefix_type;
};
template <class S>
struct summary_of<S, std::void_t<typename S::summary_type>> {
  using type = typename S::summary_type;
};
}  // namespace detail

// A sweep scheme folds events into prefix structures. fold summarizes a contiguous block of
// sorted events so that combine(t, fold(block)) equals updating t with each event in turn.
template <class S>
concept sweep_scheme = requires(const S& s, const typename S::event_type& p,
                                const typename S::prefix_type& t,
                                std::span<const typename S::event_type> block,
                                typename detail::summary_of<S>::type summary) {
  { s.less(p, p) } -> std::convertible_to<bool>;
  { s.initial() } -> std::convertible_to<typename S::prefix_type>;
  { s.update(t, p) } -> std::convertible_to<typename S::prefix_type>;
  { s.fold(block) } -> std::convertible_to<typename detail::summary_of<S>::type>;
  { s.combine(t, std::move(summary)) } -> std::convertible_to<typename S::prefix_type>;
};

template <class S>
using summary_type_t = typename detail::summary_of<S>::type;

// Telemetry of one construction. span is the longest chain of dependent update/combine
// steps, counting each block fold as one step.
struct sweep_stats {
  std::size_t span = 0;
  std::size_t updates = 0;
  std::size_t folded_events = 0;
  std::size_t combines = 0;
};

template <class P, class T>
class prefix_structures {
 public:
  prefix_structures() = default;
  prefix_structures(std::vector<P> events, std::vector<T> prefixes, T initial, std::size_t blocks)
      : events_(std::move(events)), prefixes_(std::move(prefixes)), initial_(std::move(initial)), blocks_(blocks) {}

  std::size_t size() const { return events_.size(); }
  bool empty() const { return events_.empty(); }
  std::size_t blocks() const { return blocks_; }
  const std::vector<P>& events() const { return events_; }
  const std::vector<T>& prefixes() const { return prefixes_; }
  const T& initial() const { return initial_; }
  // State after events[0..i].
  const T& at(std::size_t i) const { return prefixes_[i]; }

  // Number of leading events satisfying the monotone (true-then-false) predicate.
  template <class Pred>
  std::size_t count_leading(const Pred& included) const {
    auto it = std::partition_point(events_.begin(), events_.end(), included);
    return static_cast<std::size_t>(it - events_.begin());
  }

  // State after the last event satisfying the monotone predicate, or the initial state.
  template <class Pred>
  const T& locate_if(const Pred& included) const {
    std::size_t k = count_leading(included);
    return k == 0 ? initial_ : prefixes_[k - 1];
  }

 private:
  std::vector<P> events_;
  std::vector<T> prefixes_;
  T initial_{};
  std::size_t blocks_ = 1;
};

template <class S>
using prefix_structures_for = prefix_structures<typename S::event_type, typename S::prefix_type>;

// Last-at-or-before semantics: the state after every event e with !(q < e).
template <class S>
const typename S::prefix_type& locate(const prefix_structures_for<S>& ps, const S& scheme,
                                      const typename S::event_type& q) {
  return ps.locate_if([&](const typename S::event_type& e) { return !scheme.less(q, e); });
}

// Block count for `rounds` nested applications: c^(c/(c+1)) * n^(1/(c+1)), rounded, at least 2.
inline std::size_t recursive_block_count(std::size_t n, unsigned rounds) {
  double c = rounds;
  double b = std::pow(c, c / (c + 1)) * std::pow(static_cast<double>(n), 1.0 / (c + 1));
  return std::max<std::size_t>(2, static_cast<std::size_t>(std::llround(b)));
}

namespace detail {

struct sweep_counters {
  std::atomic<std::size_t> updates{0}, folded{0}, combines{0};
};

template <class S>
std::size_t sweep_range(const S& scheme, const typename S::event_type* ev, typename S::prefix_type* out,
                        std::size_t n, typename S::prefix_type start, std::size_t blocks, unsigned rounds,
                        sweep_counters& counters) {
  using T = typename S::prefix_type;
  using U = summary_type_t<S>;
  if (n == 0) return 0;
  if (rounds == 0 || blocks <= 1 || n <= 1) {
    const T* prev = &start;
    for (std::size_t i = 0; i < n; ++i) {
      out[i] = scheme.update(*prev, ev[i]);
      prev = &out[i];
    }
    counters.updates.fetch_add(n, std::memory_order_relaxed);
    return n;
  }
  std::size_t b = std::min(blocks, n);
  std::vector<std::size_t> off(b + 1);
  for (std::size_t i = 0; i <= b; ++i) off[i] = i * n / b;

  // Batch: the last block's summary is never needed.
  std::vector<std::optional<U>> sums(b - 1);
  parallel_for(b - 1, [&](std::size_t i) {
    sums[i].emplace(scheme.fold(std::span<const typename S::event_type>(ev + off[i], off[i + 1] - off[i])));
  });
  counters.folded.fetch_add(off[b - 1], std::memory_order_relaxed);

  // Sweep.
  std::vector<T> starts(b);
  starts[0] = std::move(start);
  for (std::size_t i = 1; i < b; ++i) starts[i] = scheme.combine(starts[i - 1], std::move(*sums[i - 1]));
  counters.combines.fetch_add(b - 1, std::memory_order_relaxed);
  sums.clear();

  // Refine.
  std::vector<std::size_t> spans(b);
  parallel_for(b, [&](std::size_t i) {
    spans[i] = sweep_range(scheme, ev + off[i], out + off[i], off[i + 1] - off[i], std::move(starts[i]), blocks,
                           rounds - 1, counters);
  });
  return 1 + (b - 1) + *std::max_element(spans.begin(), spans.end());
}

template <class S>
std::vector<typename S::event_type> sort_events(const S& scheme, std::vector<typename S::event_type> events) {
  std::vector<std::size_t> order(events.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  tbb::parallel_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (scheme.less(events[a], events[b])) return true;
    if (scheme.less(events[b], events[a])) return false;
    return a < b;
  });
  std::vector<typename S::event_type> sorted;
  sorted.reserve(events.size());
  for (std::size_t i : order) sorted.push_back(std::move(events[i]));
  return sorted;
}

}  // namespace detail

// Applies the batch/sweep/refine construction for `rounds` nested levels, each splitting its
// range into `blocks` blocks. Events are ranked by (order, input position).
template <sweep_scheme S>
prefix_structures_for<S> build_prefixes_recursive(const S& scheme, std::vector<typename S::event_type> events,
                                                  std::size_t blocks, unsigned rounds,
                                                  sweep_stats* stats = nullptr) {
  if (blocks < 1) throw argument_error("build_prefixes: blocks must be at least 1");
  if (rounds < 1) throw argument_error("build_prefixes: rounds must be at least 1");
  auto sorted = detail::sort_events(scheme, std::move(events));
  std::vector<typename S::prefix_type> prefixes(sorted.size());
  detail::sweep_counters counters;
  auto t0 = scheme.initial();
  std::size_t span = detail::sweep_range(scheme, sorted.data(), prefixes.data(), sorted.size(), t0, blocks,
                                         rounds, counters);
  if (stats) {
    stats->span = span;
    stats->updates = counters.updates.load();
    stats->folded_events = counters.folded.load();
    stats->combines = counters.combines.load();
  }
  return {std::move(sorted), std::move(prefixes), std::move(t0), blocks};
}

template <sweep_scheme S>
prefix_structures_for<S> build_prefixes(const S& scheme, std::vector<typename S::event_type> events,
                                        std::size_t blocks, sweep_stats* stats = nullptr) {
  return build_prefixes_recursive(scheme, std::move(events), blocks, 1, stats);
}

// One block per worker thread.
template <sweep_scheme S>
prefix_structures_for<S> build_prefixes(const S& scheme, std::vector<typename S::event_type> events) {
  return build_prefixes(scheme, std::move(events), worker_count());
}

// Checks combine(start, fold(block)) against updating start event by event; block must be
// sorted and consistent with start.
template <sweep_scheme S, class Eq>
bool batching_law_holds(const S& scheme, const typename S::prefix_type& start,
                        std::span<const typename S::event_type> block, const Eq& eq) {
  typename S::prefix_type step = start;
  for (const auto& e : block) step = scheme.update(step, e);
  auto batched = scheme.combine(start, scheme.fold(block));
  return eq(step, batched);
}

}  // namespace augmap
