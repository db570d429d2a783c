#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <tuple>

#include "../errors.hpp"

namespace augmap::geo {

using coord = std::int64_t;
using weight_t = std::int64_t;

inline constexpr coord default_universe = 1'000'000'000;

struct point {
  coord x = 0;
  coord y = 0;
  weight_t w = 1;
  friend bool operator==(const point&, const point&) = default;
};

// Closed window [x_lo, x_hi] x [y_lo, y_hi].
struct range_window {
  coord x_lo = 0;
  coord y_lo = 0;
  coord x_hi = 0;
  coord y_hi = 0;

  void validate() const {
    if (x_lo > x_hi || y_lo > y_hi) throw argument_error("range window has inverted bounds");
  }
  bool contains(coord x, coord y) const { return x_lo <= x && x <= x_hi && y_lo <= y && y <= y_hi; }
};

// Points are totalized by their input position.
struct point_key {
  coord x = 0;
  coord y = 0;
  std::uint32_t id = 0;
  friend bool operator==(const point_key&, const point_key&) = default;
};

struct by_x {
  static bool less(const point_key& a, const point_key& b) {
    return std::tie(a.x, a.y, a.id) < std::tie(b.x, b.y, b.id);
  }
};
struct by_y {
  static bool less(const point_key& a, const point_key& b) {
    return std::tie(a.y, a.x, a.id) < std::tie(b.y, b.x, b.id);
  }
};

// Closed box [x1, x2] x [y1, y2].
struct rectangle {
  coord x1 = 0, y1 = 0, x2 = 0, y2 = 0;
  std::uint32_t id = 0;
  friend bool operator==(const rectangle&, const rectangle&) = default;
  bool contains(coord x, coord y) const { return x1 <= x && x <= x2 && y1 <= y && y <= y2; }
};

// Corners in any order.
inline rectangle make_rectangle(coord ax, coord ay, coord bx, coord by, std::uint32_t id) {
  return {std::min(ax, bx), std::min(ay, by), std::max(ax, bx), std::max(ay, by), id};
}

struct stab_point {
  coord x = 0;
  coord y = 0;
};

// Closed interval [lo, hi].
struct interval {
  coord lo = 0;
  coord hi = 0;
  std::uint32_t id = 0;
  friend bool operator==(const interval&, const interval&) = default;
};

inline weight_t add_weights(weight_t a, weight_t b) {
#if AUGMAP_CHECKS
  weight_t s;
  if (__builtin_add_overflow(a, b, &s)) throw argument_error("weight sum overflows 64 bits");
  return s;
#else
  return static_cast<weight_t>(static_cast<std::uint64_t>(a) + static_cast<std::uint64_t>(b));
#endif
}

inline weight_t sub_weights(weight_t a, weight_t b) {
#if AUGMAP_CHECKS
  weight_t s;
  if (__builtin_sub_overflow(a, b, &s)) throw argument_error("weight difference overflows 64 bits");
  return s;
#else
  return static_cast<weight_t>(static_cast<std::uint64_t>(a) - static_cast<std::uint64_t>(b));
#endif
}

}  // namespace augmap::geo
