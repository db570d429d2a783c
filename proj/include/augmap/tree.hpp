#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <type_traits>
#include <utility>
#include <vector>

#include <tbb/parallel_sort.h>

#include "entry.hpp"
#include "errors.hpp"
#include "node.hpp"
#include "parallel.hpp"
#include "scheme/weight_balanced.hpp"

namespace augmap {

// Join-based algorithms over raw trees. Every function taking a ptr by value consumes it;
// nodes reachable from other handles are never modified.
template <class E, class S>
struct tree {
  using policy = E;
  using scheme = S;
  using node_type = node<E>;
  using ptr = node_ptr<E>;
  using key_type = typename E::key_t;
  using value_type = typename E::val_t;
  using aug_type = aug_type_t<E>;
  using entry_type = std::pair<key_type, value_type>;
  static constexpr bool augmented = augmented_policy<E>;

  struct exposed {
    ptr left;
    ptr mid;  // exclusively owned, no children, stale size and aug
    ptr right;
  };
  struct split_result {
    ptr left;
    ptr found;  // same shape as exposed::mid, or null
    ptr right;
  };
  struct last_split {
    ptr rest;
    ptr last;
  };

  // ---- primitives -------------------------------------------------------------------

  static std::size_t size(const node_type* t) { return t ? t->size : 0; }
  static bool less(const key_type& a, const key_type& b) { return E::comp(a, b); }
  static bool equal(const key_type& a, const key_type& b) { return !less(a, b) && !less(b, a); }

  static const aug_type& empty_aug() {
    static const aug_type e = [] {
      if constexpr (augmented) {
        return aug_type(E::get_empty());
      } else {
        return aug_type{};
      }
    }();
    return e;
  }
  static const aug_type& aug_of(const node_type* t) { return t ? t->aug : empty_aug(); }

  static aug_type entry_aug(const node_type& n) {
    static_assert(augmented);
    return E::from_entry(n.key, n.value);
  }

  static aug_type compute_aug(const node_type& n) {
    const node_type* l = n.left.get();
    const node_type* r = n.right.get();
    if constexpr (has_node_aug<E>) {
      return E::node_aug(aug_of(l), n.key, n.value, aug_of(r));
    } else {
      if (!l && !r) return E::from_entry(n.key, n.value);
      if (!l) return E::combine(E::from_entry(n.key, n.value), r->aug);
      if (!r) return E::combine(l->aug, E::from_entry(n.key, n.value));
      return E::combine(E::combine(l->aug, E::from_entry(n.key, n.value)), r->aug);
    }
  }

  static void update(node_type& n) {
    n.size = static_cast<std::uint32_t>(1 + size(n.left.get()) + size(n.right.get()));
    if constexpr (augmented) n.aug = compute_aug(n);
    S::update(n);
  }

  static ptr make(ptr l, ptr m, ptr r) {
    m->left = std::move(l);
    m->right = std::move(r);
    update(*m);
    return m;
  }

  static ptr single(key_type k, value_type v) {
    auto n = allocate_node<E>(std::move(k), std::move(v));
    S::init(*n);
    update(*n);
    return n;
  }

  static ptr clone_entry(const node_type& t) {
    auto n = allocate_node<E>(t.key, t.value);
    n->meta = t.meta;
    return n;
  }

  // A handle to an exclusively owned node with t's entry, children and fields.
  static ptr unshare(ptr t) {
    if (!t || t.unique()) return t;
    auto n = clone_entry(*t);
    n->left = t->left;
    n->right = t->right;
    n->size = t->size;
    if constexpr (augmented) n->aug = t->aug;
    return n;
  }

  static exposed expose(ptr t) {
    if (t.unique()) {
      ptr l = std::move(t->left);
      ptr r = std::move(t->right);
      return {std::move(l), std::move(t), std::move(r)};
    }
    return {t->left, clone_entry(*t), t->right};
  }

  static ptr link(ptr l, ptr m, ptr r) {
    return S::template join<tree>(std::move(l), std::move(m), std::move(r));
  }

  // ---- join and its derived operations -------------------------------------------------

  static ptr join(ptr l, ptr m, ptr r) {
    if (m->left || m->right) throw invariant_violation("join: middle node must be childless");
#if AUGMAP_CHECKS
    if (l && !less(last(l.get())->key, m->key))
      throw invariant_violation("join: left keys must precede the middle key");
    if (r && !less(m->key, first(r.get())->key))
      throw invariant_violation("join: right keys must follow the middle key");
#endif
    return link(std::move(l), std::move(m), std::move(r));
  }

  static split_result split(ptr t, const key_type& k) {
    if (!t) return {};
    if (less(k, t->key)) {
      auto [l, m, r] = expose(std::move(t));
      auto s = split(std::move(l), k);
      return {std::move(s.left), std::move(s.found), link(std::move(s.right), std::move(m), std::move(r))};
    }
    if (less(t->key, k)) {
      auto [l, m, r] = expose(std::move(t));
      auto s = split(std::move(r), k);
      return {link(std::move(l), std::move(m), std::move(s.left)), std::move(s.found), std::move(s.right)};
    }
    auto [l, m, r] = expose(std::move(t));
    return {std::move(l), std::move(m), std::move(r)};
  }

  static last_split split_last(ptr t) {
    auto [l, m, r] = expose(std::move(t));
    if (!r) return {std::move(l), std::move(m)};
    auto s = split_last(std::move(r));
    return {link(std::move(l), std::move(m), std::move(s.rest)), std::move(s.last)};
  }

  static ptr join2(ptr l, ptr r) {
    if (!l) return r;
    if (!r) return l;
    auto s = split_last(std::move(l));
    return link(std::move(s.rest), std::move(s.last), std::move(r));
  }

  template <class Sigma = keep_last>
  static ptr insert(ptr t, key_type k, value_type v, const Sigma& sigma = {}) {
    if (!t) return single(std::move(k), std::move(v));
    auto [l, m, r] = expose(std::move(t));
    if (less(k, m->key)) {
      l = insert(std::move(l), std::move(k), std::move(v), sigma);
    } else if (less(m->key, k)) {
      r = insert(std::move(r), std::move(k), std::move(v), sigma);
    } else {
      value_type merged = sigma(std::as_const(m->value), std::as_const(v));
      m->value = std::move(merged);
      return make(std::move(l), std::move(m), std::move(r));
    }
    return link(std::move(l), std::move(m), std::move(r));
  }

  static ptr remove(ptr t, const key_type& k) {
    auto s = split(std::move(t), k);
    return join2(std::move(s.left), std::move(s.right));
  }

  // ---- bulk operations -----------------------------------------------------------------

  static bool go_parallel(std::size_t a, std::size_t b) {
    return a >= parallel_grain && b >= parallel_grain;
  }

  template <class Sigma = keep_last>
  static ptr union_(ptr a, ptr b, const Sigma& sigma = {}) {
    if (!a) return b;
    if (!b) return a;
    bool par = go_parallel(size(a.get()), size(b.get()));
    auto [bl, bm, br] = expose(std::move(b));
    auto s = split(std::move(a), bm->key);
    ptr l, r;
    par_do(
        par, [&] { l = union_(std::move(s.left), std::move(bl), sigma); },
        [&] { r = union_(std::move(s.right), std::move(br), sigma); });
    if (s.found) {
      value_type merged = sigma(std::as_const(s.found->value), std::as_const(bm->value));
      bm->value = std::move(merged);
    }
    return link(std::move(l), std::move(bm), std::move(r));
  }

  template <class Sigma = keep_last>
  static ptr intersect(ptr a, ptr b, const Sigma& sigma = {}) {
    if (!a || !b) return {};
    bool par = go_parallel(size(a.get()), size(b.get()));
    auto [bl, bm, br] = expose(std::move(b));
    auto s = split(std::move(a), bm->key);
    ptr l, r;
    par_do(
        par, [&] { l = intersect(std::move(s.left), std::move(bl), sigma); },
        [&] { r = intersect(std::move(s.right), std::move(br), sigma); });
    if (!s.found) return join2(std::move(l), std::move(r));
    value_type merged = sigma(std::as_const(s.found->value), std::as_const(bm->value));
    bm->value = std::move(merged);
    return link(std::move(l), std::move(bm), std::move(r));
  }

  static ptr difference(ptr a, ptr b) {
    if (!a) return {};
    if (!b) return a;
    bool par = go_parallel(size(a.get()), size(b.get()));
    ptr bl = b->left;
    ptr br = b->right;
    auto s = split(std::move(a), b->key);
    b = nullptr;
    s.found = nullptr;
    ptr l, r;
    par_do(
        par, [&] { l = difference(std::move(s.left), std::move(bl)); },
        [&] { r = difference(std::move(s.right), std::move(br)); });
    return join2(std::move(l), std::move(r));
  }

  // Entries must be strictly increasing by key.
  static ptr build_sorted(const entry_type* first, std::size_t n) {
    if (n == 0) return {};
    std::size_t mid = n / 2;
    ptr l, r;
    par_do(
        n >= parallel_grain, [&] { l = build_sorted(first, mid); },
        [&] { r = build_sorted(first + mid + 1, n - mid - 1); });
    return link(std::move(l), single(first[mid].first, first[mid].second), std::move(r));
  }

  // Duplicate keys are folded left to right with sigma(existing, incoming).
  template <class Sigma = keep_last>
  static std::vector<entry_type> sort_entries(std::vector<entry_type> entries, const Sigma& sigma = {}) {
    std::vector<std::size_t> order(entries.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    tbb::parallel_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (less(entries[a].first, entries[b].first)) return true;
      if (less(entries[b].first, entries[a].first)) return false;
      return a < b;
    });
    std::vector<entry_type> out;
    out.reserve(entries.size());
    for (std::size_t i : order) {
      if (!out.empty() && equal(out.back().first, entries[i].first)) {
        value_type merged = sigma(std::as_const(out.back().second), std::as_const(entries[i].second));
        out.back().second = std::move(merged);
      } else {
        out.push_back(std::move(entries[i]));
      }
    }
    return out;
  }

  template <class Pred>
  static ptr filter(ptr t, const Pred& keep) {
    if (!t) return {};
    bool par = size(t.get()) >= 2 * parallel_grain;
    auto [l, m, r] = expose(std::move(t));
    ptr fl, fr;
    par_do(
        par, [&] { fl = filter(std::move(l), keep); }, [&] { fr = filter(std::move(r), keep); });
    if (keep(std::as_const(m->key), std::as_const(m->value)))
      return link(std::move(fl), std::move(m), std::move(fr));
    return join2(std::move(fl), std::move(fr));
  }

  // lower(k) is monotone false-then-true in key order; keeps the keys where it holds.
  template <class Lower>
  static ptr take_from(ptr t, const Lower& lower) {
    if (!t) return {};
    if (!lower(t->key)) return take_from(ptr(t->right), lower);
    auto [l, m, r] = expose(std::move(t));
    return link(take_from(std::move(l), lower), std::move(m), std::move(r));
  }

  // upper(k) is monotone true-then-false in key order; keeps the keys where it holds.
  template <class Upper>
  static ptr take_upto(ptr t, const Upper& upper) {
    if (!t) return {};
    if (!upper(t->key)) return take_upto(ptr(t->left), upper);
    auto [l, m, r] = expose(std::move(t));
    return link(std::move(l), std::move(m), take_upto(std::move(r), upper));
  }

  template <class Lower, class Upper>
  static ptr range_if(ptr t, const Lower& lower, const Upper& upper) {
    return take_upto(take_from(std::move(t), lower), upper);
  }

  // ---- read-only queries ----------------------------------------------------------------

  static const node_type* find(const node_type* t, const key_type& k) {
    while (t) {
      if (less(k, t->key)) {
        t = t->left.get();
      } else if (less(t->key, k)) {
        t = t->right.get();
      } else {
        return t;
      }
    }
    return nullptr;
  }

  static const node_type* first(const node_type* t) {
    if (!t) return nullptr;
    while (t->left) t = t->left.get();
    return t;
  }
  static const node_type* last(const node_type* t) {
    if (!t) return nullptr;
    while (t->right) t = t->right.get();
    return t;
  }
  // Smallest key strictly greater than k.
  static const node_type* next(const node_type* t, const key_type& k) {
    const node_type* best = nullptr;
    while (t) {
      if (less(k, t->key)) {
        best = t;
        t = t->left.get();
      } else {
        t = t->right.get();
      }
    }
    return best;
  }
  // Largest key strictly less than k.
  static const node_type* prev(const node_type* t, const key_type& k) {
    const node_type* best = nullptr;
    while (t) {
      if (less(t->key, k)) {
        best = t;
        t = t->right.get();
      } else {
        t = t->left.get();
      }
    }
    return best;
  }

  // Number of keys strictly less than k.
  static std::size_t rank(const node_type* t, const key_type& k) {
    std::size_t r = 0;
    while (t) {
      if (less(t->key, k)) {
        r += size(t->left.get()) + 1;
        t = t->right.get();
      } else {
        t = t->left.get();
      }
    }
    return r;
  }

  // Entry at 0-based in-order position i < size(t).
  static const node_type* select(const node_type* t, std::size_t i) {
    while (t) {
      std::size_t ls = size(t->left.get());
      if (i < ls) {
        t = t->left.get();
      } else if (i == ls) {
        return t;
      } else {
        i -= ls + 1;
        t = t->right.get();
      }
    }
    return nullptr;
  }

  template <class F>
  static void for_each(const node_type* t, F&& f) {
    while (t) {
      for_each(t->left.get(), f);
      f(t->key, t->value);
      t = t->right.get();
    }
  }

  template <class Lower, class Upper, class F>
  static void for_each_range_if(const node_type* t, const Lower& lower, const Upper& upper, F&& f) {
    while (t) {
      if (!lower(t->key)) {
        t = t->right.get();
      } else if (!upper(t->key)) {
        t = t->left.get();
      } else {
        for_each_range_if(t->left.get(), lower, upper, f);
        f(t->key, t->value);
        t = t->right.get();
      }
    }
  }

  // ---- augmented queries -------------------------------------------------------------

  template <class Lower>
  static aug_type aug_from(const node_type* t, const Lower& lower) {
    if (!t) return empty_aug();
    if (!lower(t->key)) return aug_from(t->right.get(), lower);
    return E::combine(E::combine(aug_from(t->left.get(), lower), entry_aug(*t)), aug_of(t->right.get()));
  }

  template <class Upper>
  static aug_type aug_upto(const node_type* t, const Upper& upper) {
    if (!t) return empty_aug();
    if (!upper(t->key)) return aug_upto(t->left.get(), upper);
    return E::combine(E::combine(aug_of(t->left.get()), entry_aug(*t)), aug_upto(t->right.get(), upper));
  }

  template <class Lower, class Upper>
  static aug_type aug_range_if(const node_type* t, const Lower& lower, const Upper& upper) {
    while (t) {
      if (!lower(t->key)) {
        t = t->right.get();
      } else if (!upper(t->key)) {
        t = t->left.get();
      } else {
        return E::combine(E::combine(aug_from(t->left.get(), lower), entry_aug(*t)),
                          aug_upto(t->right.get(), upper));
      }
    }
    return empty_aug();
  }

  // Combines sub(aug of each maximal in-range subtree) and ent(each in-range path entry) in
  // key order.
  template <class Lower, class Upper, class Sub, class Ent, class Comb, class B>
  static B aug_project_if(const node_type* t, const Lower& lower, const Upper& upper, const Sub& sub,
                          const Ent& ent, const Comb& comb, const B& id) {
    while (t) {
      if (!lower(t->key)) {
        t = t->right.get();
      } else if (!upper(t->key)) {
        t = t->left.get();
      } else {
        B lpart = project_from(t->left.get(), lower, sub, ent, comb, id);
        B rpart = project_upto(t->right.get(), upper, sub, ent, comb, id);
        return comb(comb(lpart, ent(t->key, t->value)), rpart);
      }
    }
    return id;
  }

  template <class Lower, class Sub, class Ent, class Comb, class B>
  static B project_from(const node_type* t, const Lower& lower, const Sub& sub, const Ent& ent,
                        const Comb& comb, const B& id) {
    B acc = id;  // accumulated from the right
    while (t) {
      if (lower(t->key)) {
        B right = t->right ? sub(t->right->aug) : id;
        acc = comb(comb(ent(t->key, t->value), right), acc);
        t = t->left.get();
      } else {
        t = t->right.get();
      }
    }
    return acc;
  }

  template <class Upper, class Sub, class Ent, class Comb, class B>
  static B project_upto(const node_type* t, const Upper& upper, const Sub& sub, const Ent& ent,
                        const Comb& comb, const B& id) {
    B acc = id;  // accumulated from the left
    while (t) {
      if (upper(t->key)) {
        B left = t->left ? sub(t->left->aug) : id;
        acc = comb(acc, comb(left, ent(t->key, t->value)));
        t = t->right.get();
      } else {
        t = t->left.get();
      }
    }
    return acc;
  }

  // Last entry whose strict-prefix aug satisfies within(); within must be monotone.
  template <class Within>
  static const node_type* aug_find(const node_type* t, const Within& within) {
    const node_type* best = nullptr;
    aug_type acc = empty_aug();
    while (t) {
      aug_type pre = E::combine(acc, aug_of(t->left.get()));
      if (within(std::as_const(pre))) {
        best = t;
        acc = E::combine(pre, entry_aug(*t));
        t = t->right.get();
      } else {
        t = t->left.get();
      }
    }
    return best;
  }

  // Adds an absent key by folding its aug into every node on the search path. Requires a
  // commutative combine; rotated nodes are recomputed from their children.
  static ptr lazy_insert(ptr t, key_type k, value_type v, const aug_type& contribution) {
    static_assert(std::is_same_v<S, weight_balanced>, "lazy insertion is defined for weight-balanced trees");
    static_assert(augmented);
    if (!t) return single(std::move(k), std::move(v));
    if (equal(k, t->key)) throw argument_error("lazy_insert: key already present");
    bool go_left = less(k, t->key);
    aug_type folded = E::combine(t->aug, contribution);
    auto [l, m, r] = expose(std::move(t));
    if (go_left) {
      l = lazy_insert(std::move(l), std::move(k), std::move(v), contribution);
    } else {
      r = lazy_insert(std::move(r), std::move(k), std::move(v), contribution);
    }
    auto wl = S::weight(l.get()), wr = S::weight(r.get());
    if (S::like(wl, wr)) {
      m->left = std::move(l);
      m->right = std::move(r);
      m->size = static_cast<std::uint32_t>(1 + size(m->left.get()) + size(m->right.get()));
      m->aug = std::move(folded);
      return m;
    }
    if (go_left) return S::template fix_left_heavy<tree>(std::move(l), std::move(m), std::move(r));
    return S::template fix_right_heavy<tree>(std::move(l), std::move(m), std::move(r));
  }
};

}  // namespace augmap
