#pragma once

#include <cstdint>
#include <tuple>

#include "types.hpp"

namespace augmap::geo {

// A closed y-interval [lo, hi] becomes two flags: +1 at (lo, opening) and -1 at (hi, closing).
// Openings sort first at a shared y, so the interval still counts at hi.
struct flag_key {
  coord y = 0;
  std::uint8_t closing = 0;
  std::uint32_t id = 0;
  friend bool operator==(const flag_key&, const flag_key&) = default;
  static bool less(const flag_key& a, const flag_key& b) {
    return std::tie(a.y, a.closing, a.id) < std::tie(b.y, b.closing, b.id);
  }
};

struct flag_count_entry {
  using key_t = flag_key;
  using val_t = std::int64_t;
  using aug_t = std::int64_t;
  static bool comp(const flag_key& a, const flag_key& b) { return flag_key::less(a, b); }
  static aug_t get_empty() { return 0; }
  static aug_t from_entry(const flag_key&, std::int64_t v) { return v; }
  static aug_t combine(aug_t a, aug_t b) { return a + b; }
  static std::uint64_t hash(const flag_key& k) { return (static_cast<std::uint64_t>(k.id) << 1) | k.closing; }
};

// Flags at or before y, in flag order.
inline auto flags_through(coord y) {
  return [y](const flag_key& k) { return k.y < y || (k.y == y && !k.closing); };
}

// Number of intervals in the map containing y.
template <class FlagMap>
std::int64_t flags_open_at(const FlagMap& m, coord y) {
  return m.aug_range_if([](const flag_key&) { return true; }, flags_through(y));
}

}  // namespace augmap::geo
