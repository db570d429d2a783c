#pragma once

#include <cstddef>
#include <memory>
#include <utility>

#include <tbb/global_control.h>
#include <tbb/info.h>
#include <tbb/parallel_for.h>
#include <tbb/parallel_invoke.h>
#include <tbb/task_arena.h>

namespace augmap {

// Bulk operations recurse sequentially once a side holds fewer entries.
inline constexpr std::size_t parallel_grain = 1024;

template <class F, class G>
void par_do(bool parallel, F&& f, G&& g) {
  if (parallel) {
    tbb::parallel_invoke(std::forward<F>(f), std::forward<G>(g));
  } else {
    f();
    g();
  }
}

// Runs body(i) for i in [0, n); grain counts iterations per task.
template <class F>
void parallel_for(std::size_t n, F&& body, std::size_t grain = 1) {
  if (n == 0) return;
  if (n <= grain) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  tbb::parallel_for(tbb::blocked_range<std::size_t>(0, n, grain),
                    [&](const tbb::blocked_range<std::size_t>& r) {
                      for (std::size_t i = r.begin(); i != r.end(); ++i) body(i);
                    });
}

inline std::size_t worker_count() {
  return static_cast<std::size_t>(tbb::this_task_arena::max_concurrency());
}

inline std::size_t hardware_threads() {
  return static_cast<std::size_t>(tbb::info::default_concurrency());
}

// Caps the scheduler at `threads` workers while alive.
class thread_limit {
 public:
  explicit thread_limit(std::size_t threads)
      : control_(std::make_unique<tbb::global_control>(
            tbb::global_control::max_allowed_parallelism, threads == 0 ? 1 : threads)) {}

 private:
  std::unique_ptr<tbb::global_control> control_;
};

}  // namespace augmap
