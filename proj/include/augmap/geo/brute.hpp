#pragma once

#include <algorithm>
#include <span>
#include <vector>

#include "segment.hpp"
#include "types.hpp"

// Quadratic reference answers used by tests and the verify command.
namespace augmap::geo::brute {

inline weight_t range_count(std::span<const point> pts, const range_window& w) {
  w.validate();
  weight_t s = 0;
  for (const auto& p : pts)
    if (w.contains(p.x, p.y)) s = add_weights(s, p.w);
  return s;
}

// Keys of the points in the window, sorted by (x, y, index).
inline std::vector<point_key> range_list(std::span<const point> pts, const range_window& w) {
  w.validate();
  std::vector<point_key> out;
  for (std::uint32_t i = 0; i < pts.size(); ++i)
    if (w.contains(pts[i].x, pts[i].y)) out.push_back({pts[i].x, pts[i].y, i});
  std::sort(out.begin(), out.end(), by_x::less);
  return out;
}

// Ids of the segments crossed by the probe, ascending.
inline std::vector<std::uint32_t> seg_list(std::span<const segment> segs, const vertical_probe& q) {
  q.validate();
  std::vector<std::uint32_t> out;
  for (const auto& s : segs)
    if (q.hits(s)) out.push_back(s.id);
  std::sort(out.begin(), out.end());
  return out;
}

inline std::int64_t seg_count(std::span<const segment> segs, const vertical_probe& q) {
  return static_cast<std::int64_t>(seg_list(segs, q).size());
}

inline std::int64_t vseg_count(std::span<const segment> segs, const horizontal_probe& q) {
  q.validate();
  std::int64_t c = 0;
  for (const auto& s : segs) c += q.hits(s);
  return c;
}

inline bool any_intersection(std::span<const segment> segs) {
  for (std::size_t i = 0; i < segs.size(); ++i)
    for (std::size_t j = i + 1; j < segs.size(); ++j)
      if (segments_intersect(segs[i], segs[j])) return true;
  return false;
}

// Ids of the rectangles containing the point, ascending.
inline std::vector<std::uint32_t> rect_list(std::span<const rectangle> rects, stab_point q) {
  std::vector<std::uint32_t> out;
  for (const auto& r : rects)
    if (r.contains(q.x, q.y)) out.push_back(r.id);
  std::sort(out.begin(), out.end());
  return out;
}

inline std::int64_t rect_count(std::span<const rectangle> rects, stab_point q) {
  return static_cast<std::int64_t>(rect_list(rects, q).size());
}

// Intervals containing q, sorted by (lo, id).
inline std::vector<interval> stab(std::span<const interval> ivs, coord q) {
  std::vector<interval> out;
  for (const auto& iv : ivs)
    if (iv.lo <= q && q <= iv.hi) out.push_back(iv);
  std::sort(out.begin(), out.end(), [](const interval& a, const interval& b) {
    return a.lo != b.lo ? a.lo < b.lo : a.id < b.id;
  });
  return out;
}

}  // namespace augmap::geo::brute
