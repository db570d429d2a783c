#pragma once

#include <algorithm>
#include <cstdint>
#include <iterator>
#include <set>
#include <span>
#include <tuple>
#include <vector>

#include "types.hpp"

namespace augmap::geo {

// Segment coordinates stay within +-2^40 so every product below fits in 128 bits.
inline constexpr coord segment_coord_limit = coord{1} << 40;

// Normalized so that (x1, y1) <= (x2, y2) lexicographically.
struct segment {
  coord x1 = 0, y1 = 0, x2 = 0, y2 = 0;
  std::uint32_t id = 0;
  friend bool operator==(const segment&, const segment&) = default;

  bool vertical() const { return x1 == x2; }
  bool horizontal() const { return y1 == y2; }
  bool alive_at(coord x) const { return x1 <= x && x <= x2; }
};

inline segment make_segment(coord ax, coord ay, coord bx, coord by, std::uint32_t id) {
  for (coord c : {ax, ay, bx, by})
    if (c < -segment_coord_limit || c > segment_coord_limit)
      throw argument_error("segment coordinate outside +-2^40");
  if (std::tie(bx, by) < std::tie(ax, ay)) {
    std::swap(ax, bx);
    std::swap(ay, by);
  }
  return {ax, ay, bx, by, id};
}

using wide = __int128;

// y(x) as num/den with den > 0. A vertical segment reports its lower end.
struct y_ratio {
  wide num;
  wide den;
};

inline y_ratio y_at(const segment& s, coord x) {
  if (s.vertical()) return {s.y1, 1};
  wide den = s.x2 - s.x1;
  return {static_cast<wide>(s.y1) * den + static_cast<wide>(s.y2 - s.y1) * (static_cast<wide>(x) - s.x1), den};
}

// Sign of y_a(x) - y_b(x).
inline int compare_y(const segment& a, const segment& b, coord x) {
  auto ya = y_at(a, x), yb = y_at(b, x);
  wide l = ya.num * yb.den, r = yb.num * ya.den;
  return (l > r) - (l < r);
}

// Sign of y_s(x) - v.
inline int compare_y(const segment& s, coord x, coord v) {
  auto ys = y_at(s, x);
  wide r = static_cast<wide>(v) * ys.den;
  return (ys.num > r) - (ys.num < r);
}

// Order of segments alive at a shared x: y at the later left endpoint, then id. Consistent
// for pairwise non-intersecting segments.
struct seg_below {
  static bool less(const segment& a, const segment& b) {
    coord x = std::max(a.x1, b.x1);
    int c = compare_y(a, b, x);
    if (c != 0) return c < 0;
    return a.id < b.id;
  }
};

// Closed segments share at least one point.
inline bool segments_intersect(const segment& a, const segment& b) {
  auto orient = [](coord ox, coord oy, coord px, coord py, coord qx, coord qy) {
    wide v = static_cast<wide>(px - ox) * (qy - oy) - static_cast<wide>(py - oy) * (qx - ox);
    return (v > 0) - (v < 0);
  };
  auto on_box = [](const segment& s, coord x, coord y) {
    return std::min(s.x1, s.x2) <= x && x <= std::max(s.x1, s.x2) && std::min(s.y1, s.y2) <= y &&
           y <= std::max(s.y1, s.y2);
  };
  int o1 = orient(a.x1, a.y1, a.x2, a.y2, b.x1, b.y1);
  int o2 = orient(a.x1, a.y1, a.x2, a.y2, b.x2, b.y2);
  int o3 = orient(b.x1, b.y1, b.x2, b.y2, a.x1, a.y1);
  int o4 = orient(b.x1, b.y1, b.x2, b.y2, a.x2, a.y2);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_box(a, b.x1, b.y1)) return true;
  if (o2 == 0 && on_box(a, b.x2, b.y2)) return true;
  if (o3 == 0 && on_box(b, a.x1, a.y1)) return true;
  if (o4 == 0 && on_box(b, a.x2, a.y2)) return true;
  return false;
}

// Sweep certificate that no two segments intersect, in O(n log n).
inline bool pairwise_disjoint(std::span<const segment> segs) {
  struct event {
    coord x;
    int kind;  // 0 insert, 1 remove
    std::uint32_t index;
  };
  std::vector<event> ev;
  ev.reserve(2 * segs.size());
  for (std::uint32_t i = 0; i < segs.size(); ++i) {
    ev.push_back({segs[i].x1, 0, i});
    ev.push_back({segs[i].x2, 1, i});
  }
  std::sort(ev.begin(), ev.end(), [](const event& a, const event& b) {
    return std::tie(a.x, a.kind, a.index) < std::tie(b.x, b.kind, b.index);
  });
  auto cmp = [&](std::uint32_t a, std::uint32_t b) {
    segment sa = segs[a], sb = segs[b];
    sa.id = a;
    sb.id = b;
    return seg_below::less(sa, sb);
  };
  std::set<std::uint32_t, decltype(cmp)> status(cmp);
  std::vector<std::set<std::uint32_t, decltype(cmp)>::iterator> where(segs.size());
  auto hit = [&](std::uint32_t a, std::uint32_t b) { return segments_intersect(segs[a], segs[b]); };
  for (const auto& e : ev) {
    if (e.kind == 0) {
      auto it = status.insert(e.index).first;
      where[e.index] = it;
      if (it != status.begin() && hit(*std::prev(it), e.index)) return false;
      if (std::next(it) != status.end() && hit(*std::next(it), e.index)) return false;
    } else {
      auto it = where[e.index];
      auto nx = std::next(it);
      if (it != status.begin() && nx != status.end() && hit(*std::prev(it), *nx)) return false;
      status.erase(it);
    }
  }
  return true;
}

// Endpoint events ranked by (x, left before right, id): a segment is alive on its closed span.
struct endpoint_key {
  coord x = 0;
  std::uint8_t right = 0;
  std::uint32_t id = 0;
  friend bool operator==(const endpoint_key&, const endpoint_key&) = default;
  static bool less(const endpoint_key& a, const endpoint_key& b) {
    return std::tie(a.x, a.right, a.id) < std::tie(b.x, b.right, b.id);
  }
};

// Endpoint events positioned before a probe at x.
inline auto before_probe(coord x) {
  return [x](const endpoint_key& k) { return k.x < x || (k.x == x && !k.right); };
}

// Probe along the vertical line x = at, restricted to y in [y_lo, y_hi].
struct vertical_probe {
  coord at = 0;
  coord y_lo = 0;
  coord y_hi = 0;
  void validate() const {
    if (y_lo > y_hi) throw argument_error("segment probe has inverted y bounds");
  }
  bool hits(const segment& s) const {
    return s.alive_at(at) && compare_y(s, at, y_lo) >= 0 && compare_y(s, at, y_hi) <= 0;
  }
};

// Probe along the horizontal line y = at, restricted to x in [x_lo, x_hi]; used against
// vertical segments.
struct horizontal_probe {
  coord at = 0;
  coord x_lo = 0;
  coord x_hi = 0;
  void validate() const {
    if (x_lo > x_hi) throw argument_error("segment probe has inverted x bounds");
  }
  bool hits(const segment& s) const { return x_lo <= s.x1 && s.x1 <= x_hi && s.y1 <= at && at <= s.y2; }
};

}  // namespace augmap::geo
