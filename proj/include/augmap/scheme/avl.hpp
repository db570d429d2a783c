#pragma once

#include <algorithm>

#include "../counters.hpp"
#include "common.hpp"

namespace augmap {

// meta holds the height in nodes; the empty tree has height 0.
struct avl {
  static constexpr balance_scheme tag = balance_scheme::avl;

  template <class N>
  static std::uint32_t height(const N* t) { return t ? t->meta : 0; }

  template <class N>
  static void init(N&) {}

  template <class N>
  static void update(N& n) { n.meta = 1 + std::max(height(n.left.get()), height(n.right.get())); }

  // Height in edges, empty normalized to 0.
  template <class N>
  static std::uint32_t rank(const N* t) {
    auto h = height(t);
    return h == 0 ? 0 : h - 1;
  }

  template <class N>
  static const char* local_violation(const N& n) {
    auto hl = height(n.left.get()), hr = height(n.right.get());
    if (n.meta != 1 + std::max(hl, hr)) return "stale AVL height";
    if (hl > hr + 1 || hr > hl + 1) return "AVL height imbalance";
    return nullptr;
  }

  template <class T>
  static typename T::ptr join(typename T::ptr l, typename T::ptr m, typename T::ptr r) {
    auto hl = height(l.get()), hr = height(r.get());
    if (hl > hr + 1) return join_right<T>(std::move(l), std::move(m), std::move(r));
    if (hr > hl + 1) return join_left<T>(std::move(l), std::move(m), std::move(r));
    return T::make(std::move(l), std::move(m), std::move(r));
  }

 private:
  template <class T>
  static typename T::ptr join_right(typename T::ptr l, typename T::ptr m, typename T::ptr r) {
    auto [tl, k1, c] = T::expose(std::move(l));
    auto hr = height(r.get());
    if (height(c.get()) <= hr + 1) {
      auto h1 = 1 + std::max(height(c.get()), hr);
      if (h1 <= height(tl.get()) + 1) {
        return T::make(std::move(tl), std::move(k1), T::make(std::move(c), std::move(m), std::move(r)));
      }
      // c is one taller than r: double rotation around c.
      auto [c1, ck, c2] = T::expose(std::move(c));
      rotation_counter().add(2);
      return T::make(T::make(std::move(tl), std::move(k1), std::move(c1)), std::move(ck),
                     T::make(std::move(c2), std::move(m), std::move(r)));
    }
    auto t1 = join_right<T>(std::move(c), std::move(m), std::move(r));
    if (height(t1.get()) <= height(tl.get()) + 1) return T::make(std::move(tl), std::move(k1), std::move(t1));
    auto [a, kk, b] = T::expose(std::move(t1));
    rotation_counter().add(1);
    return T::make(T::make(std::move(tl), std::move(k1), std::move(a)), std::move(kk), std::move(b));
  }

  template <class T>
  static typename T::ptr join_left(typename T::ptr l, typename T::ptr m, typename T::ptr r) {
    auto [c, k1, tr] = T::expose(std::move(r));
    auto hl = height(l.get());
    if (height(c.get()) <= hl + 1) {
      auto h1 = 1 + std::max(height(c.get()), hl);
      if (h1 <= height(tr.get()) + 1) {
        return T::make(T::make(std::move(l), std::move(m), std::move(c)), std::move(k1), std::move(tr));
      }
      auto [c1, ck, c2] = T::expose(std::move(c));
      rotation_counter().add(2);
      return T::make(T::make(std::move(l), std::move(m), std::move(c1)), std::move(ck),
                     T::make(std::move(c2), std::move(k1), std::move(tr)));
    }
    auto t1 = join_left<T>(std::move(l), std::move(m), std::move(c));
    if (height(t1.get()) <= height(tr.get()) + 1) return T::make(std::move(t1), std::move(k1), std::move(tr));
    auto [a, kk, b] = T::expose(std::move(t1));
    rotation_counter().add(1);
    return T::make(std::move(a), std::move(kk), T::make(std::move(b), std::move(k1), std::move(tr)));
  }
};

}  // namespace augmap
