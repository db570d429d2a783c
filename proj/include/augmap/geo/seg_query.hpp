#pragma once

#include <algorithm>
#include <memory>
#include <span>
#include <vector>

#include "../aug_map.hpp"
#include "../sweep.hpp"
#include "flags.hpp"
#include "segment.hpp"
#include "stabbing.hpp"

namespace augmap::geo {

// A segment held by address; the segment storage outlives every set that names it. Sets of
// refs keep nodes at one cache line where whole segments would not.
struct segment_ref {
  const segment* seg = nullptr;
  std::uint32_t id = 0;
  segment_ref() = default;
  explicit segment_ref(const segment& s) : seg(&s), id(s.id) {}
  const segment& operator*() const { return *seg; }
  const segment* operator->() const { return seg; }
  friend bool operator==(const segment_ref& a, const segment_ref& b) { return a.id == b.id; }
};

// Segments in y-order with a count.
struct segment_set_entry {
  using key_t = segment_ref;
  using val_t = char;
  using aug_t = std::int64_t;
  static bool comp(const segment_ref& a, const segment_ref& b) { return seg_below::less(*a, *b); }
  static aug_t get_empty() { return 0; }
  static aug_t from_entry(const segment_ref&, char) { return 1; }
  static aug_t combine(aug_t a, aug_t b) { return a + b; }
  static std::uint64_t hash(const segment_ref& s) { return s.id; }
};

template <class S = weight_balanced>
struct segment_traits {
  using element = segment_ref;
  using set_map = aug_map<segment_set_entry, S>;
  static coord x_lo(const segment_ref& s) { return s->x1; }
  static coord x_hi(const segment_ref& s) { return s->x2; }
  static set_map singleton(const segment_ref& s) { return set_map::singleton(s, 0); }
  static set_map build_set(std::vector<segment_ref> segs) {
    std::vector<typename set_map::entry_type> es;
    es.reserve(segs.size());
    for (auto& s : segs) es.emplace_back(s, 0);
    return set_map::build(std::move(es));
  }
};

// Owned copy of the input that set entries point into; shared so structures stay movable.
class segment_store {
 public:
  segment_store() = default;
  explicit segment_store(std::span<const segment> segs)
      : segs_(std::make_shared<const std::vector<segment>>(segs.begin(), segs.end())) {}
  std::vector<segment_ref> refs() const {
    std::vector<segment_ref> out;
    if (!segs_) return out;
    out.reserve(segs_->size());
    for (const auto& s : *segs_) out.emplace_back(s);
    return out;
  }
  std::span<const segment> segments() const {
    return segs_ ? std::span<const segment>(*segs_) : std::span<const segment>();
  }

 private:
  std::shared_ptr<const std::vector<segment>> segs_;
};

// Rejects probes or segments the structures are not defined for.
inline void require_valid_segments(std::span<const segment> segs) {
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const auto& s = segs[i];
    if (s.id != i) throw argument_error("segment ids must equal their input positions");
    if (std::tie(s.x2, s.y2) < std::tie(s.x1, s.y1)) throw argument_error("segment endpoints are not normalized");
  }
}

namespace detail {

// The probe's y-bounds as monotone predicates over a set alive at q.at.
inline auto y_at_least(const vertical_probe& q) {
  return [q](const segment_ref& s) { return compare_y(*s, q.at, q.y_lo) >= 0; };
}
inline auto y_at_most(const vertical_probe& q) {
  return [q](const segment_ref& s) { return compare_y(*s, q.at, q.y_hi) <= 0; };
}

template <class Set>
std::int64_t count_in(const Set& alive, const vertical_probe& q) {
  return alive.aug_range_if(y_at_least(q), y_at_most(q));
}

template <class Set>
void list_in(const Set& alive, const vertical_probe& q, std::vector<std::uint32_t>& out) {
  alive.for_each_in(y_at_least(q), y_at_most(q), [&](const segment_ref& s, char) { out.push_back(s.id); });
}

}  // namespace detail

// Stabbing over non-intersecting segments via open and boundary sets.
template <class S = weight_balanced>
class seg_tree {
 public:
  using traits = segment_traits<S>;
  using base = stab_tree<traits, S>;

  seg_tree() = default;
  static seg_tree build(std::span<const segment> segs) {
    require_valid_segments(segs);
    segment_store store(segs);
    auto refs = store.refs();
    return seg_tree(std::move(store), base::build(refs));
  }

  const base& structure() const { return tree_; }
  std::size_t size() const { return tree_.size(); }

  std::int64_t count(const vertical_probe& q) const {
    q.validate();
    std::int64_t c = 0;
    tree_.for_each_alive_set(q.at, [&](const auto& set) { c += detail::count_in(set, q); });
    return c;
  }

  // Ids ascending.
  std::vector<std::uint32_t> list(const vertical_probe& q) const {
    q.validate();
    std::vector<std::uint32_t> out;
    tree_.for_each_alive_set(q.at, [&](const auto& set) { detail::list_in(set, q, out); });
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  seg_tree(segment_store store, base t) : store_(std::move(store)), tree_(std::move(t)) {}
  segment_store store_;
  base tree_;
};

template <class S = weight_balanced>
class seg_sweep {
 public:
  using traits = segment_traits<S>;
  using base = stab_sweep<traits>;

  seg_sweep() = default;
  static seg_sweep build(std::span<const segment> segs, std::size_t blocks) {
    require_valid_segments(segs);
    segment_store store(segs);
    auto refs = store.refs();
    return seg_sweep(std::move(store), base::build(refs, blocks));
  }

  const base& structure() const { return sweep_; }

  std::int64_t count(const vertical_probe& q) const {
    q.validate();
    return detail::count_in(sweep_.alive_at(q.at), q);
  }

  std::vector<std::uint32_t> list(const vertical_probe& q) const {
    q.validate();
    std::vector<std::uint32_t> out;
    detail::list_in(sweep_.alive_at(q.at), q, out);
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  seg_sweep(segment_store store, base s) : store_(std::move(store)), sweep_(std::move(s)) {}
  segment_store store_;
  base sweep_;
};

inline void require_vertical(std::span<const segment> segs) {
  require_valid_segments(segs);
  for (const auto& s : segs)
    if (!s.vertical()) throw argument_error("segment counting requires vertical segments");
}

// Entry of a vertical segment in its flag map: +1 at the lower end, -1 at the upper one.
template <class S>
aug_map<flag_count_entry, S> segment_flags(const segment& s) {
  using map = aug_map<flag_count_entry, S>;
  typename map::entry_type es[2] = {{{s.y1, 0, s.id}, 1}, {{s.y2, 1, s.id}, -1}};
  return map::build_sorted(es);
}

// Counting over vertical segments: outer map in x-order, inner flag maps over y.
template <class S = weight_balanced>
class seg_count_tree {
 public:
  using flag_map = aug_map<flag_count_entry, S>;

  struct outer_entry {
    using key_t = point_key;
    using val_t = segment;
    using aug_t = flag_map;
    static bool comp(const point_key& a, const point_key& b) { return by_x::less(a, b); }
    static aug_t get_empty() { return {}; }
    static aug_t from_entry(const point_key&, const segment& s) { return segment_flags<S>(s); }
    static aug_t combine(const aug_t& a, const aug_t& b) { return map_union(a, b); }
    static std::uint64_t hash(const point_key& k) { return k.id; }
  };
  using outer_map = aug_map<outer_entry, S>;

  seg_count_tree() = default;
  static seg_count_tree build(std::span<const segment> segs) {
    require_vertical(segs);
    std::vector<typename outer_map::entry_type> es;
    es.reserve(segs.size());
    for (const auto& s : segs) es.emplace_back(point_key{s.x1, s.y1, s.id}, s);
    return seg_count_tree(outer_map::build(std::move(es)));
  }

  const outer_map& outer() const { return outer_; }

  std::int64_t count(const horizontal_probe& q) const {
    q.validate();
    auto inner = [&](const flag_map& m) { return flags_open_at(m, q.at); };
    auto entry = [&](const point_key&, const segment& s) -> std::int64_t { return s.y1 <= q.at && q.at <= s.y2; };
    return outer_.aug_project_if(x_at_least(q.x_lo), x_at_most(q.x_hi), inner, entry, std::plus<>{},
                                 std::int64_t{0});
  }

 private:
  static auto x_at_least(coord v) { return [v](const point_key& k) { return k.x >= v; }; }
  static auto x_at_most(coord v) { return [v](const point_key& k) { return k.x <= v; }; }

  explicit seg_count_tree(outer_map m) : outer_(std::move(m)) {}
  outer_map outer_;
};

template <class S = weight_balanced>
struct vertical_flag_scheme {
  struct event_type {
    point_key key;
    segment seg;
  };
  using prefix_type = aug_map<flag_count_entry, S>;
  bool less(const event_type& a, const event_type& b) const { return by_x::less(a.key, b.key); }
  prefix_type initial() const { return {}; }
  prefix_type update(const prefix_type& t, const event_type& e) const { return map_union(t, segment_flags<S>(e.seg)); }
  prefix_type fold(std::span<const event_type> block) const {
    std::vector<typename prefix_type::entry_type> es;
    es.reserve(2 * block.size());
    for (const auto& e : block) {
      es.push_back({{e.seg.y1, 0, e.seg.id}, 1});
      es.push_back({{e.seg.y2, 1, e.seg.id}, -1});
    }
    return prefix_type::build(std::move(es));
  }
  prefix_type combine(const prefix_type& t, const prefix_type& s) const { return map_union(t, s); }
};

template <class S = weight_balanced>
class seg_count_sweep {
 public:
  using scheme = vertical_flag_scheme<S>;

  seg_count_sweep() = default;
  static seg_count_sweep build(std::span<const segment> segs, std::size_t blocks) {
    require_vertical(segs);
    std::vector<typename scheme::event_type> ev;
    ev.reserve(segs.size());
    for (const auto& s : segs) ev.push_back({{s.x1, s.y1, s.id}, s});
    return seg_count_sweep(build_prefixes(scheme{}, std::move(ev), blocks));
  }

  const prefix_structures_for<scheme>& prefixes() const { return ps_; }

  std::int64_t count(const horizontal_probe& q) const {
    q.validate();
    const auto& upto_hi = ps_.locate_if([&](const auto& e) { return e.key.x <= q.x_hi; });
    const auto& below_lo = ps_.locate_if([&](const auto& e) { return e.key.x < q.x_lo; });
    return flags_open_at(upto_hi, q.at) - flags_open_at(below_lo, q.at);
  }

 private:
  explicit seg_count_sweep(prefix_structures_for<scheme> ps) : ps_(std::move(ps)) {}
  prefix_structures_for<scheme> ps_;
};

}  // namespace augmap::geo
