#pragma once

#include <functional>
#include <string>

#include "errors.hpp"
#include "tree.hpp"

namespace augmap {

// Full structural validation: key order, sizes, reference counts, scheme balance and,
// when requested, stored aug against a recomputation.
template <class E, class S>
class tree_checker {
 public:
  using T = tree<E, S>;
  using node_type = typename T::node_type;

  static void validate(const node_type* root, bool check_aug = true) {
    walk(root, nullptr, nullptr, check_aug);
  }

  template <class AugEq>
  static void validate(const node_type* root, AugEq aug_eq) {
    walk_with(root, nullptr, nullptr, aug_eq);
  }

 private:
  using key_type = typename T::key_type;

  static void fail(const std::string& what) { throw invariant_violation("tree check: " + what); }

  static std::size_t walk(const node_type* t, const key_type* lo, const key_type* hi, bool check_aug) {
    if constexpr (T::augmented && requires(const typename T::aug_type& a) { a == a; }) {
      if (check_aug) {
        return walk_with(t, lo, hi, [](const auto& a, const auto& b) { return a == b; });
      }
    }
    return walk_with(t, lo, hi, nullptr);
  }

  template <class AugEq>
  static std::size_t walk_with(const node_type* t, const key_type* lo, const key_type* hi,
                               const AugEq& aug_eq) {
    if (!t) return 0;
    if (t->refs.load() == 0) fail("live node with zero references");
    if (lo && !T::less(*lo, t->key)) fail("key order violated");
    if (hi && !T::less(t->key, *hi)) fail("key order violated");
    std::size_t ls = walk_with(t->left.get(), lo, &t->key, aug_eq);
    std::size_t rs = walk_with(t->right.get(), &t->key, hi, aug_eq);
    if (t->size != ls + rs + 1) fail("stale size");
    if (const char* why = S::local_violation(*t)) fail(why);
    if constexpr (T::augmented && !std::is_same_v<AugEq, std::nullptr_t>) {
      if (!aug_eq(t->aug, T::compute_aug(*t))) fail("stale augmented value");
    }
    return ls + rs + 1;
  }
};

}  // namespace augmap
