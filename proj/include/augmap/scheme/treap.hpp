#pragma once

#include <atomic>

#include "../entry.hpp"
#include "common.hpp"

namespace augmap {

enum class priority_mode { hashed, seeded_random };

// Priority source for nodes created from now on; existing nodes keep their priority.
class treap_priorities {
 public:
  static void use_hashed() { state().mode.store(priority_mode::hashed); }
  static void use_seeded_random(std::uint64_t seed) {
    state().seed.store(seed);
    state().draws.store(0);
    state().mode.store(priority_mode::seeded_random);
  }
  static priority_mode mode() { return state().mode.load(std::memory_order_relaxed); }

  template <class E>
  static std::uint32_t draw(const typename E::key_t& k) {
    auto& s = state();
    if (s.mode.load(std::memory_order_relaxed) == priority_mode::hashed) {
      return static_cast<std::uint32_t>(key_hash<E>(k) >> 32);
    }
    auto i = s.draws.fetch_add(1, std::memory_order_relaxed);
    return static_cast<std::uint32_t>(mix64(s.seed.load(std::memory_order_relaxed) ^ mix64(i)) >> 32);
  }

 private:
  struct shared {
    std::atomic<priority_mode> mode{priority_mode::hashed};
    std::atomic<std::uint64_t> seed{0};
    std::atomic<std::uint64_t> draws{0};
  };
  static shared& state() {
    static shared s;
    return s;
  }
};

// meta holds the priority; ties are broken by key order so the heap order is strict.
struct treap {
  static constexpr balance_scheme tag = balance_scheme::treap;

  template <class N>
  static void init(N& n) {
    n.meta = treap_priorities::draw<typename N::policy>(n.key);
  }
  template <class N>
  static void update(N&) {}

  // Logarithm of the weight, the expected depth scale.
  template <class N>
  static std::uint32_t rank(const N* t) { return floor_log2((t ? std::uint64_t{t->size} : 0) + 1); }

  template <class N>
  static bool above(const N* a, const N* b) {
    if (!a) return false;
    if (!b) return true;
    if (a->meta != b->meta) return a->meta > b->meta;
    return N::policy::comp(a->key, b->key);
  }

  template <class N>
  static const char* local_violation(const N& n) {
    if (above(n.left.get(), &n) || above(n.right.get(), &n)) return "heap order violated";
    return nullptr;
  }

  template <class T>
  static typename T::ptr join(typename T::ptr l, typename T::ptr m, typename T::ptr r) {
    if (above(l.get(), m.get()) && above(l.get(), r.get())) {
      auto [a, k, b] = T::expose(std::move(l));
      return T::make(std::move(a), std::move(k), join<T>(std::move(b), std::move(m), std::move(r)));
    }
    if (above(r.get(), m.get()) && above(r.get(), l.get())) {
      auto [a, k, b] = T::expose(std::move(r));
      return T::make(join<T>(std::move(l), std::move(m), std::move(a)), std::move(k), std::move(b));
    }
    return T::make(std::move(l), std::move(m), std::move(r));
  }
};

}  // namespace augmap
