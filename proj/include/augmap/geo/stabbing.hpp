#pragma once

#include <algorithm>
#include <span>
#include <vector>

#include "../aug_map.hpp"
#include "../sweep.hpp"
#include "segment.hpp"

// Shared machinery for elements alive on a closed x-span [x_lo, x_hi]: a tree over all span
// endpoints whose nodes keep open and boundary sets, and a sweep whose prefixes are alive sets.
//
// A stab_traits type supplies
//   element, with members id;
//   set_map, an aug_map of elements;
//   x_lo(e), x_hi(e);
//   singleton(e) and build_set(vector<element>) producing set_map values.
// Every set operation below only meets elements alive at one common x, so set orders may be
// defined relative to such an x.
namespace augmap::geo {

template <class Traits>
struct endpoint_event {
  endpoint_key key;
  typename Traits::element elem;
};

template <class Traits>
std::vector<endpoint_event<Traits>> endpoint_events(std::span<const typename Traits::element> elems) {
  std::vector<endpoint_event<Traits>> out;
  out.reserve(2 * elems.size());
  for (const auto& e : elems) {
    out.push_back({{Traits::x_lo(e), 0, e.id}, e});
    out.push_back({{Traits::x_hi(e), 1, e.id}, e});
  }
  return out;
}

// Open sets of an endpoint run: left_open holds elements whose right endpoint lies in the run
// but whose left one does not; right_open the converse. At tree nodes cross_lr holds elements
// that start in the left part (left subtree and entry) and leave the node's range, cross_rl
// those that enter from the left and end in the right part (entry and right subtree).
template <class Set>
struct open_sets {
  Set left_open;
  Set right_open;
  Set cross_lr;
  Set cross_rl;
  friend bool operator==(const open_sets&, const open_sets&) = default;
};

template <class Set>
Set set_union(const Set& a, const Set& b) {
  return map_union(a, b);
}
template <class Set>
Set set_minus(const Set& a, const Set& b) {
  if (a.empty() || b.empty()) return a;
  return map_difference(a, b);
}

// Concatenation of two adjacent runs: segments closing inside are dropped.
template <class Set>
open_sets<Set> concat_open(const open_sets<Set>& a, const open_sets<Set>& b) {
  return {set_union(a.left_open, set_minus(b.left_open, a.right_open)),
          set_union(b.right_open, set_minus(a.right_open, b.left_open)), {}, {}};
}

template <class Traits, class S = weight_balanced>
class stab_tree {
 public:
  using element = typename Traits::element;
  using set_map = typename Traits::set_map;
  using sets = open_sets<set_map>;

  struct outer_entry {
    using key_t = endpoint_key;
    using val_t = element;
    using aug_t = sets;
    static bool comp(const endpoint_key& a, const endpoint_key& b) { return endpoint_key::less(a, b); }
    static aug_t get_empty() { return {}; }
    static aug_t from_entry(const endpoint_key& k, const element& e) {
      sets s;
      (k.right ? s.left_open : s.right_open) = Traits::singleton(e);
      return s;
    }
    static aug_t combine(const aug_t& a, const aug_t& b) { return concat_open(a, b); }
    static aug_t node_aug(const aug_t& l, const endpoint_key& k, const element& e, const aug_t& r) {
      set_map opens, closes;  // the entry's own contribution
      (k.right ? closes : opens) = Traits::singleton(e);
      auto enter_right = set_minus(r.left_open, l.right_open);
      auto leave_left = set_minus(l.right_open, r.left_open);
      sets out;
      out.cross_lr = set_union(set_minus(opens, r.left_open), set_minus(leave_left, closes));
      out.cross_rl = set_union(set_minus(enter_right, opens), set_minus(closes, l.right_open));
      out.left_open = set_union(l.left_open, out.cross_rl);
      out.right_open = set_union(r.right_open, out.cross_lr);
      return out;
    }
    static std::uint64_t hash(const endpoint_key& k) { return (static_cast<std::uint64_t>(k.id) << 1) | k.right; }
  };
  using outer_map = aug_map<outer_entry, S>;
  using node_type = typename outer_map::node_type;

  stab_tree() = default;

  static stab_tree build(std::span<const element> elems) {
    std::vector<typename outer_map::entry_type> es;
    es.reserve(2 * elems.size());
    for (auto& ev : endpoint_events<Traits>(elems)) es.emplace_back(ev.key, ev.elem);
    return stab_tree(outer_map::build(std::move(es)));
  }

  const outer_map& outer() const { return outer_; }
  std::size_t size() const { return outer_.size() / 2; }

  // Calls f(set) for disjoint sets whose union is the set of elements alive at x.
  template <class F>
  void for_each_alive_set(coord x, F&& f) const {
    auto before = before_probe(x);
    for (const node_type* t = outer_.root(); t;) {
      if (before(t->key)) {
        if (!t->aug.cross_lr.empty()) f(t->aug.cross_lr);
        t = t->right.get();
      } else {
        if (!t->aug.cross_rl.empty()) f(t->aug.cross_rl);
        t = t->left.get();
      }
    }
  }

 private:
  explicit stab_tree(outer_map m) : outer_(std::move(m)) {}
  outer_map outer_;
};

// Sweep scheme: event i's prefix is the set of elements alive just after it.
template <class Traits>
struct alive_sweep_scheme {
  using element = typename Traits::element;
  using set_map = typename Traits::set_map;
  using event_type = endpoint_event<Traits>;
  using prefix_type = set_map;
  // Block effect: leaving elements started before the block, entering ones outlive it.
  struct summary_type {
    set_map leaving;
    set_map entering;
  };

  bool less(const event_type& a, const event_type& b) const { return endpoint_key::less(a.key, b.key); }
  set_map initial() const { return {}; }
  set_map update(const set_map& t, const event_type& e) const {
    return e.key.right ? map_difference(t, Traits::singleton(e.elem)) : map_union(t, Traits::singleton(e.elem));
  }
  summary_type fold(std::span<const event_type> block) const {
    std::vector<const event_type*> opens, closes;
    for (const auto& e : block) (e.key.right ? closes : opens).push_back(&e);
    auto by_id = [](const event_type* a, const event_type* b) { return a->key.id < b->key.id; };
    std::sort(opens.begin(), opens.end(), by_id);
    std::sort(closes.begin(), closes.end(), by_id);
    std::vector<element> leaving, entering;
    std::size_t i = 0, j = 0;
    while (i < opens.size() || j < closes.size()) {
      if (j == closes.size() || (i < opens.size() && opens[i]->key.id < closes[j]->key.id)) {
        entering.push_back(opens[i++]->elem);
      } else if (i == opens.size() || closes[j]->key.id < opens[i]->key.id) {
        leaving.push_back(closes[j++]->elem);
      } else {
        ++i, ++j;
      }
    }
    return {Traits::build_set(std::move(leaving)), Traits::build_set(std::move(entering))};
  }
  // Removal goes first so the union only compares elements alive at the block's end.
  set_map combine(const set_map& t, summary_type s) const {
    return set_union(set_minus(t, s.leaving), s.entering);
  }
};

template <class Traits>
class stab_sweep {
 public:
  using scheme = alive_sweep_scheme<Traits>;
  using set_map = typename Traits::set_map;
  using element = typename Traits::element;

  stab_sweep() = default;

  static stab_sweep build(std::span<const element> elems, std::size_t blocks) {
    return stab_sweep(build_prefixes(scheme{}, endpoint_events<Traits>(elems), blocks));
  }

  const prefix_structures_for<scheme>& prefixes() const { return ps_; }

  const set_map& alive_at(coord x) const {
    auto before = before_probe(x);
    return ps_.locate_if([&](const typename scheme::event_type& e) { return before(e.key); });
  }

 private:
  explicit stab_sweep(prefix_structures_for<scheme> ps) : ps_(std::move(ps)) {}
  prefix_structures_for<scheme> ps_;
};

}  // namespace augmap::geo
