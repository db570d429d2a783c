#pragma once

#include <array>
#include <atomic>
#include <cstdint>
#include <functional>
#include <thread>

namespace augmap {

// Sharded event counter; writers touch a slot chosen by thread id.
class counter {
 public:
  void add(std::int64_t v = 1) noexcept {
    slots_[slot_index()].value.fetch_add(v, std::memory_order_relaxed);
  }
  std::int64_t read() const noexcept {
    std::int64_t s = 0;
    for (const auto& c : slots_) s += c.value.load(std::memory_order_relaxed);
    return s;
  }

 private:
  static constexpr std::size_t slot_count = 64;
  struct alignas(64) slot {
    std::atomic<std::int64_t> value{0};
  };
  static std::size_t slot_index() noexcept {
    thread_local const std::size_t idx =
        std::hash<std::thread::id>{}(std::this_thread::get_id()) % slot_count;
    return idx;
  }
  std::array<slot, slot_count> slots_{};
};

// Per-node-type allocation telemetry.
template <class Tag>
struct node_stats {
  static counter& allocated() {
    static counter c;
    return c;
  }
  static counter& freed() {
    static counter c;
    return c;
  }
  static std::int64_t live() { return allocated().read() - freed().read(); }
};

// Totals over every node type.
using all_node_stats = node_stats<void>;

// Process-wide counters for scheme-specific telemetry.
inline counter& rotation_counter() {
  static counter c;
  return c;
}

}  // namespace augmap
