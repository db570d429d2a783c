#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "check.hpp"
#include "scheme/avl.hpp"
#include "scheme/red_black.hpp"
#include "scheme/treap.hpp"
#include "scheme/weight_balanced.hpp"
#include "tree.hpp"

namespace augmap {

// Persistent ordered map with an augmented value per subtree. Operations producing a map
// return a new version and leave their operands intact.
template <class E, class S = weight_balanced>
class aug_map {
 public:
  using policy = E;
  using scheme = S;
  using tree_type = tree<E, S>;
  using node_type = typename tree_type::node_type;
  using ptr = typename tree_type::ptr;
  using key_type = typename E::key_t;
  using value_type = typename E::val_t;
  using aug_type = aug_type_t<E>;
  using entry_type = std::pair<key_type, value_type>;

  aug_map() = default;
  explicit aug_map(ptr root) noexcept : root_(std::move(root)) {}

  template <class Sigma = keep_last>
  static aug_map build(std::vector<entry_type> entries, const Sigma& sigma = {}) {
    auto sorted = tree_type::sort_entries(std::move(entries), sigma);
    return aug_map(tree_type::build_sorted(sorted.data(), sorted.size()));
  }

  // Entries must be strictly increasing by key.
  static aug_map build_sorted(std::span<const entry_type> entries) {
    for (std::size_t i = 1; i < entries.size(); ++i) {
      if (!tree_type::less(entries[i - 1].first, entries[i].first))
        throw argument_error("build_sorted: keys must be strictly increasing");
    }
    return aug_map(tree_type::build_sorted(entries.data(), entries.size()));
  }

  static aug_map singleton(key_type k, value_type v) {
    return aug_map(tree_type::single(std::move(k), std::move(v)));
  }

  std::size_t size() const { return tree_type::size(root_.get()); }
  bool empty() const { return !root_; }
  const node_type* root() const { return root_.get(); }
  const ptr& handle() const { return root_; }
  std::uint32_t balance_rank() const { return S::rank(root_.get()); }

  std::optional<value_type> find(const key_type& k) const {
    if (auto n = tree_type::find(root_.get(), k)) return n->value;
    return std::nullopt;
  }
  bool contains(const key_type& k) const { return tree_type::find(root_.get(), k) != nullptr; }

  // On an equal key the stored value becomes sigma(existing, v).
  template <class Sigma = keep_last>
  aug_map insert(key_type k, value_type v, const Sigma& sigma = {}) const {
    return aug_map(tree_type::insert(root_, std::move(k), std::move(v), sigma));
  }
  aug_map erase(const key_type& k) const { return aug_map(tree_type::remove(root_, k)); }

  // Weight-balanced only; the key must be absent and combine commutative.
  aug_map lazy_insert(key_type k, value_type v) const {
    auto contribution = E::from_entry(k, v);
    return aug_map(tree_type::lazy_insert(root_, std::move(k), std::move(v), contribution));
  }

  aug_type aug_val() const { return tree_type::aug_of(root_.get()); }

  // Closed key interval.
  aug_type aug_range(const key_type& lo, const key_type& hi) const {
    if (tree_type::less(hi, lo)) throw argument_error("aug_range: lower bound exceeds upper bound");
    return tree_type::aug_range_if(root_.get(), at_least(lo), at_most(hi));
  }
  // Absent bounds are unbounded.
  aug_type aug_range(const std::optional<key_type>& lo, const std::optional<key_type>& hi) const {
    if (lo && hi) return aug_range(*lo, *hi);
    if (lo) return tree_type::aug_from(root_.get(), at_least(*lo));
    if (hi) return tree_type::aug_upto(root_.get(), at_most(*hi));
    return aug_val();
  }
  template <class Lower, class Upper>
  aug_type aug_range_if(const Lower& lower, const Upper& upper) const {
    return tree_type::aug_range_if(root_.get(), lower, upper);
  }
  // Keys strictly below k.
  aug_type aug_left(const key_type& k) const {
    return tree_type::aug_upto(root_.get(), [&](const key_type& x) { return tree_type::less(x, k); });
  }
  // Keys strictly above k.
  aug_type aug_right(const key_type& k) const {
    return tree_type::aug_from(root_.get(), [&](const key_type& x) { return tree_type::less(k, x); });
  }

  // Combines project(aug) over the subtrees covering [lo, hi]; entries on the search paths
  // contribute project(from_entry(k, v)).
  template <class Project, class CombineB, class B>
  B aug_project(const key_type& lo, const key_type& hi, const Project& project,
                const CombineB& combine_b, const B& identity_b) const {
    auto entry = [&](const key_type& k, const value_type& v) { return project(E::from_entry(k, v)); };
    return aug_project(lo, hi, project, entry, combine_b, identity_b);
  }
  template <class Project, class ProjectEntry, class CombineB, class B>
  B aug_project(const key_type& lo, const key_type& hi, const Project& project,
                const ProjectEntry& project_entry, const CombineB& combine_b, const B& identity_b) const {
    if (tree_type::less(hi, lo)) throw argument_error("aug_project: lower bound exceeds upper bound");
    return tree_type::aug_project_if(root_.get(), at_least(lo), at_most(hi), project, project_entry,
                                     combine_b, identity_b);
  }
  template <class Lower, class Upper, class Project, class ProjectEntry, class CombineB, class B>
  B aug_project_if(const Lower& lower, const Upper& upper, const Project& project,
                   const ProjectEntry& project_entry, const CombineB& combine_b, const B& identity_b) const {
    return tree_type::aug_project_if(root_.get(), lower, upper, project, project_entry, combine_b,
                                     identity_b);
  }

  // Last entry whose strict-prefix aug satisfies within(prefix).
  template <class Within>
  std::optional<entry_type> aug_find(const Within& within) const {
    return as_entry(tree_type::aug_find(root_.get(), within));
  }

  std::size_t rank(const key_type& k) const { return tree_type::rank(root_.get(), k); }
  entry_type select(std::size_t i) const {
    if (i >= size()) throw argument_error("select: index out of range");
    auto n = tree_type::select(root_.get(), i);
    return {n->key, n->value};
  }

  aug_map range(const key_type& lo, const key_type& hi) const {
    if (tree_type::less(hi, lo)) throw argument_error("range: lower bound exceeds upper bound");
    return aug_map(tree_type::range_if(root_, at_least(lo), at_most(hi)));
  }
  template <class Lower, class Upper>
  aug_map range_if(const Lower& lower, const Upper& upper) const {
    return aug_map(tree_type::range_if(root_, lower, upper));
  }
  template <class Pred>
  aug_map filter(const Pred& keep) const {
    return aug_map(tree_type::filter(root_, keep));
  }

  std::optional<entry_type> first() const { return as_entry(tree_type::first(root_.get())); }
  std::optional<entry_type> last() const { return as_entry(tree_type::last(root_.get())); }
  std::optional<entry_type> next(const key_type& k) const { return as_entry(tree_type::next(root_.get(), k)); }
  std::optional<entry_type> prev(const key_type& k) const { return as_entry(tree_type::prev(root_.get(), k)); }

  template <class F>
  void for_each(F&& f) const {
    tree_type::for_each(root_.get(), f);
  }
  template <class Lower, class Upper, class F>
  void for_each_in(const Lower& lower, const Upper& upper, F&& f) const {
    tree_type::for_each_range_if(root_.get(), lower, upper, f);
  }

  std::vector<entry_type> entries() const {
    std::vector<entry_type> out;
    out.reserve(size());
    for_each([&](const key_type& k, const value_type& v) { out.emplace_back(k, v); });
    return out;
  }
  std::vector<key_type> keys() const {
    std::vector<key_type> out;
    out.reserve(size());
    for_each([&](const key_type& k, const value_type&) { out.push_back(k); });
    return out;
  }

  void validate(bool check_aug = true) const { tree_checker<E, S>::validate(root_.get(), check_aug); }

  // Entry-wise equality; keys compare by equivalence under comp.
  friend bool operator==(const aug_map& a, const aug_map& b) {
    if (a.root_ == b.root_) return true;
    if (a.size() != b.size()) return false;
    auto ea = a.entries();
    auto eb = b.entries();
    for (std::size_t i = 0; i < ea.size(); ++i) {
      if (!tree_type::equal(ea[i].first, eb[i].first)) return false;
      if (!(ea[i].second == eb[i].second)) return false;
    }
    return true;
  }

  static auto at_least(const key_type& lo) {
    return [&lo](const key_type& x) { return !tree_type::less(x, lo); };
  }
  static auto at_most(const key_type& hi) {
    return [&hi](const key_type& x) { return !tree_type::less(hi, x); };
  }

 private:
  static std::optional<entry_type> as_entry(const node_type* n) {
    if (!n) return std::nullopt;
    return entry_type{n->key, n->value};
  }

  ptr root_;
};

// m2's value wins on shared keys unless sigma says otherwise; sigma(v1, v2).
template <class E, class S, class Sigma = keep_last>
aug_map<E, S> map_union(const aug_map<E, S>& m1, const aug_map<E, S>& m2, const Sigma& sigma = {}) {
  return aug_map<E, S>(tree<E, S>::union_(m1.handle(), m2.handle(), sigma));
}

template <class E, class S, class Sigma = keep_last>
aug_map<E, S> map_intersect(const aug_map<E, S>& m1, const aug_map<E, S>& m2, const Sigma& sigma = {}) {
  return aug_map<E, S>(tree<E, S>::intersect(m1.handle(), m2.handle(), sigma));
}

template <class E, class S>
aug_map<E, S> map_difference(const aug_map<E, S>& m1, const aug_map<E, S>& m2) {
  return aug_map<E, S>(tree<E, S>::difference(m1.handle(), m2.handle()));
}

// Plain join-based ordered map without augmentation.
template <class K, class V, class Less = std::less<K>>
struct plain_entry {
  using key_t = K;
  using val_t = V;
  static bool comp(const K& a, const K& b) { return Less{}(a, b); }
};

template <class K, class V, class S = weight_balanced, class Less = std::less<K>>
using ordered_map = aug_map<plain_entry<K, V, Less>, S>;

// Sum of values.
template <class K, class V, class Less = std::less<K>>
struct sum_entry {
  using key_t = K;
  using val_t = V;
  using aug_t = V;
  static bool comp(const K& a, const K& b) { return Less{}(a, b); }
  static aug_t get_empty() { return V{}; }
  static aug_t from_entry(const K&, const V& v) { return v; }
  static aug_t combine(const aug_t& a, const aug_t& b) { return a + b; }
};

// Number of entries.
template <class K, class V, class Less = std::less<K>>
struct count_entry {
  using key_t = K;
  using val_t = V;
  using aug_t = std::int64_t;
  static bool comp(const K& a, const K& b) { return Less{}(a, b); }
  static aug_t get_empty() { return 0; }
  static aug_t from_entry(const K&, const V&) { return 1; }
  static aug_t combine(aug_t a, aug_t b) { return a + b; }
};

}  // namespace augmap
