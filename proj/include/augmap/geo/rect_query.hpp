#pragma once

#include <algorithm>
#include <limits>
#include <span>
#include <tuple>
#include <vector>

#include "../aug_map.hpp"
#include "flags.hpp"
#include "stabbing.hpp"
#include "types.hpp"

namespace augmap::geo {

struct interval_key {
  coord lo = 0;
  std::uint32_t id = 0;
  friend bool operator==(const interval_key&, const interval_key&) = default;
  static bool less(const interval_key& a, const interval_key& b) { return std::tie(a.lo, a.id) < std::tie(b.lo, b.id); }
};

// Intervals by (lo, id); the value is hi and the aug the largest hi below.
struct interval_entry {
  using key_t = interval_key;
  using val_t = coord;
  using aug_t = coord;
  static bool comp(const interval_key& a, const interval_key& b) { return interval_key::less(a, b); }
  static aug_t get_empty() { return std::numeric_limits<coord>::min(); }
  static aug_t from_entry(const interval_key&, coord hi) { return hi; }
  static aug_t combine(aug_t a, aug_t b) { return std::max(a, b); }
  static std::uint64_t hash(const interval_key& k) { return k.id; }
};

// Calls f(key, hi) for every interval containing q, in key order. Subtrees whose largest hi is
// below q are skipped, and nothing right of a key with lo > q is entered. visited counts the
// nodes examined.
template <class Map, class F>
void stab_each(const Map& m, coord q, F&& f, std::size_t* visited = nullptr) {
  std::size_t seen = 0;
  auto go = [&](auto&& self, const typename Map::node_type* t) -> void {
    while (t) {
      ++seen;
      if (t->aug < q) return;
      if (q < t->key.lo) {
        t = t->left.get();
        continue;
      }
      self(self, t->left.get());
      if (q <= t->value) f(t->key, t->value);
      t = t->right.get();
    }
  };
  go(go, m.root());
  if (visited) *visited += seen;
}

template <class S = weight_balanced>
class interval_tree {
 public:
  using map_type = aug_map<interval_entry, S>;

  interval_tree() = default;
  static interval_tree build(std::span<const interval> ivs) {
    std::vector<typename map_type::entry_type> es;
    es.reserve(ivs.size());
    for (const auto& iv : ivs) {
      if (iv.lo > iv.hi) throw argument_error("interval has lo above hi");
      es.emplace_back(interval_key{iv.lo, iv.id}, iv.hi);
    }
    return interval_tree(map_type::build(std::move(es)));
  }

  const map_type& map() const { return map_; }
  std::size_t size() const { return map_.size(); }

  // Sorted by (lo, id).
  std::vector<interval> stab(coord q, std::size_t* visited = nullptr) const {
    std::vector<interval> out;
    stab_each(map_, q, [&](const interval_key& k, coord hi) { out.push_back({k.lo, hi, k.id}); }, visited);
    return out;
  }

  std::int64_t count(coord q) const {
    std::int64_t c = 0;
    stab_each(map_, q, [&](const interval_key&, coord) { ++c; });
    return c;
  }

 private:
  explicit interval_tree(map_type m) : map_(std::move(m)) {}
  map_type map_;
};

inline void require_valid_rectangles(std::span<const rectangle> rects) {
  for (std::size_t i = 0; i < rects.size(); ++i) {
    const auto& r = rects[i];
    if (r.id != i) throw argument_error("rectangle ids must equal their input positions");
    if (r.x1 > r.x2 || r.y1 > r.y2) throw argument_error("rectangle corners are not normalized");
  }
}

// Rectangles alive on [x1, x2], kept as interval trees over their y-extent.
template <class S = weight_balanced>
struct rect_interval_traits {
  using element = rectangle;
  using set_map = aug_map<interval_entry, S>;
  static coord x_lo(const rectangle& r) { return r.x1; }
  static coord x_hi(const rectangle& r) { return r.x2; }
  static set_map singleton(const rectangle& r) { return set_map::singleton({r.y1, r.id}, r.y2); }
  static set_map build_set(std::vector<rectangle> rects) {
    std::vector<typename set_map::entry_type> es;
    es.reserve(rects.size());
    for (const auto& r : rects) es.emplace_back(interval_key{r.y1, r.id}, r.y2);
    return set_map::build(std::move(es));
  }
};

// Same, as +1/-1 flags over y for counting.
template <class S = weight_balanced>
struct rect_flag_traits {
  using element = rectangle;
  using set_map = aug_map<flag_count_entry, S>;
  static coord x_lo(const rectangle& r) { return r.x1; }
  static coord x_hi(const rectangle& r) { return r.x2; }
  static set_map singleton(const rectangle& r) {
    typename set_map::entry_type es[2] = {{{r.y1, 0, r.id}, 1}, {{r.y2, 1, r.id}, -1}};
    return set_map::build_sorted(es);
  }
  static set_map build_set(std::vector<rectangle> rects) {
    std::vector<typename set_map::entry_type> es;
    es.reserve(2 * rects.size());
    for (const auto& r : rects) {
      es.push_back({{r.y1, 0, r.id}, 1});
      es.push_back({{r.y2, 1, r.id}, -1});
    }
    return set_map::build(std::move(es));
  }
};

template <class S = weight_balanced>
class rect_tree {
 public:
  using base = stab_tree<rect_interval_traits<S>, S>;

  rect_tree() = default;
  static rect_tree build(std::span<const rectangle> rects) {
    require_valid_rectangles(rects);
    return rect_tree(base::build(rects));
  }
  const base& structure() const { return tree_; }

  // Ids ascending.
  std::vector<std::uint32_t> list(stab_point q, std::size_t* visited = nullptr) const {
    std::vector<std::uint32_t> out;
    tree_.for_each_alive_set(q.x, [&](const auto& set) {
      stab_each(set, q.y, [&](const interval_key& k, coord) { out.push_back(k.id); }, visited);
    });
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  explicit rect_tree(base t) : tree_(std::move(t)) {}
  base tree_;
};

template <class S = weight_balanced>
class rect_sweep {
 public:
  using base = stab_sweep<rect_interval_traits<S>>;

  rect_sweep() = default;
  static rect_sweep build(std::span<const rectangle> rects, std::size_t blocks) {
    require_valid_rectangles(rects);
    return rect_sweep(base::build(rects, blocks));
  }
  const base& structure() const { return sweep_; }

  std::vector<std::uint32_t> list(stab_point q, std::size_t* visited = nullptr) const {
    std::vector<std::uint32_t> out;
    stab_each(sweep_.alive_at(q.x), q.y, [&](const interval_key& k, coord) { out.push_back(k.id); }, visited);
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  explicit rect_sweep(base s) : sweep_(std::move(s)) {}
  base sweep_;
};

template <class S = weight_balanced>
class rect_count_tree {
 public:
  using base = stab_tree<rect_flag_traits<S>, S>;

  rect_count_tree() = default;
  static rect_count_tree build(std::span<const rectangle> rects) {
    require_valid_rectangles(rects);
    return rect_count_tree(base::build(rects));
  }
  const base& structure() const { return tree_; }

  std::int64_t count(stab_point q) const {
    std::int64_t c = 0;
    tree_.for_each_alive_set(q.x, [&](const auto& set) { c += flags_open_at(set, q.y); });
    return c;
  }

 private:
  explicit rect_count_tree(base t) : tree_(std::move(t)) {}
  base tree_;
};

template <class S = weight_balanced>
class rect_count_sweep {
 public:
  using base = stab_sweep<rect_flag_traits<S>>;

  rect_count_sweep() = default;
  static rect_count_sweep build(std::span<const rectangle> rects, std::size_t blocks) {
    require_valid_rectangles(rects);
    return rect_count_sweep(base::build(rects, blocks));
  }
  const base& structure() const { return sweep_; }

  std::int64_t count(stab_point q) const { return flags_open_at(sweep_.alive_at(q.x), q.y); }

 private:
  explicit rect_count_sweep(base s) : sweep_(std::move(s)) {}
  base sweep_;
};

}  // namespace augmap::geo
