#pragma once

#include <algorithm>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "../aug_map.hpp"
#include "../sweep.hpp"
#include "types.hpp"

namespace augmap::geo {

// Inner map: points in y-order with their total weight.
struct weight_by_y {
  using key_t = point_key;
  using val_t = weight_t;
  using aug_t = weight_t;
  static bool comp(const point_key& a, const point_key& b) { return by_y::less(a, b); }
  static aug_t get_empty() { return 0; }
  static aug_t from_entry(const point_key&, weight_t w) { return w; }
  static aug_t combine(aug_t a, aug_t b) { return add_weights(a, b); }
  static std::uint64_t hash(const point_key& k) { return k.id; }
};

// Inner map: points in y-order with the largest x below each node.
struct max_x_by_y {
  using key_t = point_key;
  using val_t = weight_t;
  using aug_t = coord;
  static bool comp(const point_key& a, const point_key& b) { return by_y::less(a, b); }
  static aug_t get_empty() { return std::numeric_limits<coord>::min(); }
  static aug_t from_entry(const point_key& k, weight_t) { return k.x; }
  static aug_t combine(aug_t a, aug_t b) { return std::max(a, b); }
  static std::uint64_t hash(const point_key& k) { return k.id; }
};

inline auto x_at_least(coord v) { return [v](const point_key& k) { return k.x >= v; }; }
inline auto x_at_most(coord v) { return [v](const point_key& k) { return k.x <= v; }; }
inline auto y_at_least(coord v) { return [v](const point_key& k) { return k.y >= v; }; }
inline auto y_at_most(coord v) { return [v](const point_key& k) { return k.y <= v; }; }

struct weighted_point {
  point_key key;
  weight_t w = 1;
};

inline std::vector<weighted_point> keyed_points(std::span<const point> pts) {
  std::vector<weighted_point> out(pts.size());
  for (std::uint32_t i = 0; i < pts.size(); ++i) out[i] = {{pts[i].x, pts[i].y, i}, pts[i].w};
  return out;
}

// Two-level tree: outer map in x-order whose aug is the y-ordered map of its subtree.
template <class S = weight_balanced>
class range_tree {
 public:
  using inner_map = aug_map<weight_by_y, S>;

  struct outer_entry {
    using key_t = point_key;
    using val_t = weight_t;
    using aug_t = inner_map;
    static bool comp(const point_key& a, const point_key& b) { return by_x::less(a, b); }
    static aug_t get_empty() { return {}; }
    static aug_t from_entry(const point_key& k, weight_t w) { return inner_map::singleton(k, w); }
    static aug_t combine(const aug_t& a, const aug_t& b) { return map_union(a, b); }
    static std::uint64_t hash(const point_key& k) { return k.id; }
  };
  using outer_map = aug_map<outer_entry, S>;

  range_tree() = default;

  static range_tree build(std::span<const point> pts) {
    std::vector<typename outer_map::entry_type> es;
    es.reserve(pts.size());
    for (auto& p : keyed_points(pts)) es.emplace_back(p.key, p.w);
    return range_tree(outer_map::build(std::move(es)), static_cast<std::uint32_t>(pts.size()));
  }

  std::size_t size() const { return outer_.size(); }
  const outer_map& outer() const { return outer_; }

  weight_t count(const range_window& w) const {
    w.validate();
    auto sub = [&](const inner_map& in) { return in.aug_range_if(y_at_least(w.y_lo), y_at_most(w.y_hi)); };
    auto ent = [&](const point_key& k, weight_t v) { return (k.y >= w.y_lo && k.y <= w.y_hi) ? v : 0; };
    return outer_.aug_project_if(x_at_least(w.x_lo), x_at_most(w.x_hi), sub, ent, add_weights, weight_t{0});
  }

  // Sorted by (x, y, id).
  std::vector<point_key> list(const range_window& w) const {
    w.validate();
    std::vector<point_key> out;
    auto sub = [&](const inner_map& in) {
      in.for_each_in(y_at_least(w.y_lo), y_at_most(w.y_hi), [&](const point_key& k, weight_t) { out.push_back(k); });
      return 0;
    };
    auto ent = [&](const point_key& k, weight_t) {
      if (k.y >= w.y_lo && k.y <= w.y_hi) out.push_back(k);
      return 0;
    };
    outer_.aug_project_if(x_at_least(w.x_lo), x_at_most(w.x_hi), sub, ent, [](int, int) { return 0; }, 0);
    std::sort(out.begin(), out.end(), by_x::less);
    return out;
  }

  // The new point gets the next unused id. Weight-balanced outer trees only.
  range_tree lazy_insert(const point& p) const {
    point_key k{p.x, p.y, next_id_};
    return range_tree(outer_.lazy_insert(k, p.w), next_id_ + 1);
  }

  std::uint32_t next_id() const { return next_id_; }

 private:
  range_tree(outer_map m, std::uint32_t next_id) : outer_(std::move(m)), next_id_(next_id) {}

  outer_map outer_;
  std::uint32_t next_id_ = 0;
};

// RangeSwp scheme: points in x-order, each prefix the y-ordered map of the points so far.
template <class Inner, class S = weight_balanced>
struct point_sweep_scheme {
  using event_type = weighted_point;
  using prefix_type = aug_map<Inner, S>;
  bool less(const weighted_point& a, const weighted_point& b) const { return by_x::less(a.key, b.key); }
  prefix_type initial() const { return {}; }
  prefix_type update(const prefix_type& t, const weighted_point& p) const { return t.insert(p.key, p.w); }
  prefix_type fold(std::span<const weighted_point> block) const {
    std::vector<typename prefix_type::entry_type> es;
    es.reserve(block.size());
    for (auto& p : block) es.emplace_back(p.key, p.w);
    return prefix_type::build(std::move(es));
  }
  prefix_type combine(const prefix_type& t, const prefix_type& s) const { return map_union(t, s); }
};

enum class sweep_variant { counting, reporting, both };

template <class S = weight_balanced>
class range_sweep {
 public:
  using count_map = aug_map<weight_by_y, S>;
  using report_map = aug_map<max_x_by_y, S>;
  using count_scheme = point_sweep_scheme<weight_by_y, S>;
  using report_scheme = point_sweep_scheme<max_x_by_y, S>;

  range_sweep() = default;

  static range_sweep build(std::span<const point> pts, std::size_t blocks,
                           sweep_variant variant = sweep_variant::both) {
    range_sweep rs;
    auto events = keyed_points(pts);
    if (variant != sweep_variant::reporting) {
      auto live0 = stats_of<weight_by_y>::live();
      rs.counting_.emplace(build_prefixes(count_scheme{}, events, blocks));
      rs.counting_nodes_ = static_cast<std::size_t>(stats_of<weight_by_y>::live() - live0);
    }
    if (variant != sweep_variant::counting) {
      auto live0 = stats_of<max_x_by_y>::live();
      rs.reporting_.emplace(build_prefixes(report_scheme{}, std::move(events), blocks));
      rs.reporting_nodes_ = static_cast<std::size_t>(stats_of<max_x_by_y>::live() - live0);
    }
    return rs;
  }

  bool has_counting() const { return counting_.has_value(); }
  bool has_reporting() const { return reporting_.has_value(); }
  const prefix_structures_for<count_scheme>& counting() const { return *counting_; }
  const prefix_structures_for<report_scheme>& reporting() const { return *reporting_; }
  // Inner nodes allocated by the construction and still live.
  std::size_t node_count() const { return counting_nodes_ + reporting_nodes_; }
  std::size_t node_count_of(sweep_variant v) const {
    if (v == sweep_variant::counting) return counting_nodes_;
    if (v == sweep_variant::reporting) return reporting_nodes_;
    return node_count();
  }

  weight_t count(const range_window& w) const {
    w.validate();
    if (!counting_) throw argument_error("range sweep was built without the counting variant");
    const auto& upto_hi = counting_->locate_if([&](const weighted_point& e) { return e.key.x <= w.x_hi; });
    const auto& below_lo = counting_->locate_if([&](const weighted_point& e) { return e.key.x < w.x_lo; });
    auto in_y = [&](const count_map& t) { return t.aug_range_if(y_at_least(w.y_lo), y_at_most(w.y_hi)); };
    return sub_weights(in_y(upto_hi), in_y(below_lo));
  }

  // Sorted by (x, y, id). visited counts nodes examined, including pruned ones.
  std::vector<point_key> list(const range_window& w, std::size_t* visited = nullptr) const {
    w.validate();
    if (!reporting_) throw argument_error("range sweep was built without the reporting variant");
    const auto& t = reporting_->locate_if([&](const weighted_point& e) { return e.key.x <= w.x_hi; });
    std::vector<point_key> out;
    std::size_t seen = 0;
    collect(t.root(), w, out, seen);
    if (visited) *visited = seen;
    std::sort(out.begin(), out.end(), by_x::less);
    return out;
  }

 private:
  using report_node = typename report_map::node_type;

  static void collect(const report_node* t, const range_window& w, std::vector<point_key>& out, std::size_t& seen) {
    while (t) {
      ++seen;
      if (t->aug < w.x_lo) return;
      if (t->key.y < w.y_lo) {
        t = t->right.get();
      } else if (t->key.y > w.y_hi) {
        t = t->left.get();
      } else {
        if (t->key.x >= w.x_lo) out.push_back(t->key);
        collect(t->left.get(), w, out, seen);
        t = t->right.get();
      }
    }
  }

  std::optional<prefix_structures_for<count_scheme>> counting_;
  std::optional<prefix_structures_for<report_scheme>> reporting_;
  std::size_t counting_nodes_ = 0;
  std::size_t reporting_nodes_ = 0;
};

}  // namespace augmap::geo
