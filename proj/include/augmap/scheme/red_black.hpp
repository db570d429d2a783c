#pragma once

#include "common.hpp"

namespace augmap {

// meta bit 0 is the red flag; meta >> 1 is the black height counting this node if black.
// The empty tree is black with black height 0.
struct red_black {
  static constexpr balance_scheme tag = balance_scheme::red_black;

  template <class N>
  static bool red(const N* t) { return t && (t->meta & 1u); }
  template <class N>
  static std::uint32_t black_height(const N* t) { return t ? t->meta >> 1 : 0; }

  template <class N>
  static void init(N& n) { n.meta = 0; }

  template <class N>
  static void update(N& n) {
    auto color = n.meta & 1u;
    n.meta = ((black_height(n.left.get()) + (color ? 0u : 1u)) << 1) | color;
  }

  template <class N>
  static void set_red(N& n, bool is_red) {
    n.meta = (n.meta & ~1u) | (is_red ? 1u : 0u);
    update(n);
  }

  // 2 * black height, plus one when the root is red.
  template <class N>
  static std::uint32_t rank(const N* t) { return 2 * black_height(t) + (red(t) ? 1 : 0); }

  template <class N>
  static const char* local_violation(const N& n) {
    if (black_height(n.left.get()) != black_height(n.right.get())) return "unequal black heights";
    if ((n.meta & 1u) && (red(n.left.get()) || red(n.right.get()))) return "red node with red child";
    auto expect = black_height(n.left.get()) + ((n.meta & 1u) ? 0u : 1u);
    if ((n.meta >> 1) != expect) return "stale black height";
    return nullptr;
  }

  template <class T>
  static typename T::ptr join(typename T::ptr l, typename T::ptr m, typename T::ptr r) {
    auto bl = black_height(l.get()), br = black_height(r.get());
    if (bl > br) {
      auto t = join_right<T>(std::move(l), std::move(m), std::move(r));
      if (red(t.get()) && red(t->right.get())) set_red(*t, false);
      return t;
    }
    if (br > bl) {
      auto t = join_left<T>(std::move(l), std::move(m), std::move(r));
      if (red(t.get()) && red(t->left.get())) set_red(*t, false);
      return t;
    }
    set_red(*m, !red(l.get()) && !red(r.get()));
    return T::make(std::move(l), std::move(m), std::move(r));
  }

 private:
  template <class T>
  static typename T::ptr join_right(typename T::ptr l, typename T::ptr m, typename T::ptr r) {
    if (rank(l.get()) == (rank(r.get()) / 2) * 2) {
      set_red(*m, true);
      return T::make(std::move(l), std::move(m), std::move(r));
    }
    auto [a, k, b] = T::expose(std::move(l));
    auto j = join_right<T>(std::move(b), std::move(m), std::move(r));
    if (!red(k.get()) && red(j.get()) && red(j->right.get())) {
      auto [j1, jk, j2] = T::expose(std::move(j));
      j2 = T::unshare(std::move(j2));
      set_red(*j2, false);
      return T::make(T::make(std::move(a), std::move(k), std::move(j1)), std::move(jk), std::move(j2));
    }
    return T::make(std::move(a), std::move(k), std::move(j));
  }

  template <class T>
  static typename T::ptr join_left(typename T::ptr l, typename T::ptr m, typename T::ptr r) {
    if (rank(r.get()) == (rank(l.get()) / 2) * 2) {
      set_red(*m, true);
      return T::make(std::move(l), std::move(m), std::move(r));
    }
    auto [a, k, b] = T::expose(std::move(r));
    auto j = join_left<T>(std::move(l), std::move(m), std::move(a));
    if (!red(k.get()) && red(j.get()) && red(j->left.get())) {
      auto [j1, jk, j2] = T::expose(std::move(j));
      j1 = T::unshare(std::move(j1));
      set_red(*j1, false);
      return T::make(std::move(j1), std::move(jk), T::make(std::move(j2), std::move(k), std::move(b)));
    }
    return T::make(std::move(j), std::move(k), std::move(b));
  }
};

}  // namespace augmap
