#pragma once

#include "common.hpp"

namespace augmap {

// Weight is size + 1. With alpha = 1/4, two weights are balanced iff each is at least a
// quarter of their sum.
struct weight_balanced {
  static constexpr balance_scheme tag = balance_scheme::weight_balanced;

  template <class N>
  static std::uint64_t weight(const N* t) { return t ? std::uint64_t{t->size} + 1 : 1; }

  static bool like(std::uint64_t a, std::uint64_t b) { return 3 * a >= b && 3 * b >= a; }
  // a exceeds 1 - alpha of the combined weight.
  static bool heavy(std::uint64_t a, std::uint64_t b) { return a > 3 * b; }

  template <class N>
  static void init(N&) {}
  template <class N>
  static void update(N&) {}

  template <class N>
  static std::uint32_t rank(const N* t) { return floor_log2(weight(t)); }

  template <class N>
  static const char* local_violation(const N& n) {
    if (!like(weight(n.left.get()), weight(n.right.get()))) return "weight imbalance";
    return nullptr;
  }

  template <class T>
  static typename T::ptr join(typename T::ptr l, typename T::ptr m, typename T::ptr r) {
    auto wl = weight(l.get()), wr = weight(r.get());
    if (heavy(wl, wr)) return join_right<T>(std::move(l), std::move(m), std::move(r));
    if (heavy(wr, wl)) return join_left<T>(std::move(l), std::move(m), std::move(r));
    return T::make(std::move(l), std::move(m), std::move(r));
  }

  // Restores balance at a node whose left side grew or right side shrank by a bounded amount.
  template <class T>
  static typename T::ptr fix_left_heavy(typename T::ptr l, typename T::ptr m, typename T::ptr r) {
    auto wr = weight(r.get());
    if (like(weight(l.get()), wr)) return T::make(std::move(l), std::move(m), std::move(r));
    auto w_ll = weight(l->left.get()), w_lr = weight(l->right.get());
    if (like(wr, w_lr) && like(wr + w_lr, w_ll)) {
      auto [a, k, b] = T::expose(std::move(l));
      return T::make(std::move(a), std::move(k), T::make(std::move(b), std::move(m), std::move(r)));
    }
    auto [a, k, b] = T::expose(std::move(l));
    auto [b1, bk, b2] = T::expose(std::move(b));
    return T::make(T::make(std::move(a), std::move(k), std::move(b1)), std::move(bk),
                   T::make(std::move(b2), std::move(m), std::move(r)));
  }

  template <class T>
  static typename T::ptr fix_right_heavy(typename T::ptr l, typename T::ptr m, typename T::ptr r) {
    auto wl = weight(l.get());
    if (like(wl, weight(r.get()))) return T::make(std::move(l), std::move(m), std::move(r));
    auto w_rl = weight(r->left.get()), w_rr = weight(r->right.get());
    if (like(wl, w_rl) && like(wl + w_rl, w_rr)) {
      auto [a, k, b] = T::expose(std::move(r));
      return T::make(T::make(std::move(l), std::move(m), std::move(a)), std::move(k), std::move(b));
    }
    auto [a, k, b] = T::expose(std::move(r));
    auto [a1, ak, a2] = T::expose(std::move(a));
    return T::make(T::make(std::move(l), std::move(m), std::move(a1)), std::move(ak),
                   T::make(std::move(a2), std::move(k), std::move(b)));
  }

 private:
  template <class T>
  static typename T::ptr join_right(typename T::ptr l, typename T::ptr m, typename T::ptr r) {
    if (like(weight(l.get()), weight(r.get()))) return T::make(std::move(l), std::move(m), std::move(r));
    auto [a, k, c] = T::expose(std::move(l));
    auto t1 = join_right<T>(std::move(c), std::move(m), std::move(r));
    return fix_right_heavy<T>(std::move(a), std::move(k), std::move(t1));
  }

  template <class T>
  static typename T::ptr join_left(typename T::ptr l, typename T::ptr m, typename T::ptr r) {
    if (like(weight(l.get()), weight(r.get()))) return T::make(std::move(l), std::move(m), std::move(r));
    auto [c, k, b] = T::expose(std::move(r));
    auto t1 = join_left<T>(std::move(l), std::move(m), std::move(c));
    return fix_left_heavy<T>(std::move(t1), std::move(k), std::move(b));
  }
};

}  // namespace augmap
