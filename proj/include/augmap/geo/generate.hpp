#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "segment.hpp"
#include "types.hpp"

// Seeded workload generators. Identical (n, seed, universe) give identical output.
namespace augmap::geo::gen {

using rng_type = std::mt19937_64;

inline coord uniform(rng_type& rng, coord lo, coord hi) {
  return std::uniform_int_distribution<coord>(lo, hi)(rng);
}

inline std::vector<point> points(std::size_t n, std::uint64_t seed, coord universe = default_universe) {
  rng_type rng(seed);
  std::vector<point> out(n);
  for (auto& p : out) {
    p.x = uniform(rng, 0, universe);
    p.y = uniform(rng, 0, universe);
  }
  return out;
}

// Distinct y-levels with random x-spans; each endpoint is then nudged by less than a third of
// the gap to the neighbouring levels, so no two segments can meet.
inline std::vector<segment> segments(std::size_t n, std::uint64_t seed, coord universe = default_universe) {
  if (n > static_cast<std::size_t>(universe) + 1) throw argument_error("more segments than distinct y-levels");
  if (universe > segment_coord_limit) throw argument_error("segment universe exceeds 2^40");
  rng_type rng(seed);
  std::vector<coord> levels;
  levels.reserve(n);
  while (levels.size() < n) {
    while (levels.size() < n) levels.push_back(uniform(rng, 0, universe));
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  }
  std::shuffle(levels.begin(), levels.end(), rng);
  std::vector<coord> sorted = levels;
  std::sort(sorted.begin(), sorted.end());
  auto slack = [&](coord y) {
    auto it = std::lower_bound(sorted.begin(), sorted.end(), y);
    coord below = it == sorted.begin() ? y : y - *std::prev(it);
    coord above = std::next(it) == sorted.end() ? universe - y : *std::next(it) - y;
    return (std::min(below, above) - 1) / 3;
  };
  std::vector<segment> out(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    coord a = uniform(rng, 0, universe), b = uniform(rng, 0, universe);
    coord d = std::max<coord>(0, slack(levels[i]));
    coord ya = levels[i] + uniform(rng, -d, d), yb = levels[i] + uniform(rng, -d, d);
    out[i] = make_segment(std::min(a, b), ya, std::max(a, b), yb, i);
  }
  return out;
}

// Vertical segments with independent x and y-extent.
inline std::vector<segment> vertical_segments(std::size_t n, std::uint64_t seed, coord universe = default_universe) {
  if (universe > segment_coord_limit) throw argument_error("segment universe exceeds 2^40");
  rng_type rng(seed);
  std::vector<segment> out(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    coord x = uniform(rng, 0, universe);
    coord a = uniform(rng, 0, universe), b = uniform(rng, 0, universe);
    out[i] = make_segment(x, std::min(a, b), x, std::max(a, b), i);
  }
  return out;
}

// Side lengths average 2 * universe / sqrt(n), so a random point lies in about four boxes.
inline std::vector<rectangle> rectangles(std::size_t n, std::uint64_t seed, coord universe = default_universe) {
  rng_type rng(seed);
  coord side = n == 0 ? universe : static_cast<coord>(4.0 * universe / std::sqrt(static_cast<double>(n)));
  side = std::clamp<coord>(side, 1, universe);
  std::vector<rectangle> out(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    coord x = uniform(rng, 0, universe), y = uniform(rng, 0, universe);
    coord w = uniform(rng, 0, side), h = uniform(rng, 0, side);
    out[i] = make_rectangle(x, y, std::min(universe, x + w), std::min(universe, y + h), i);
  }
  return out;
}

enum class window_class { small, large };

// Small windows expect a handful of hits, large ones about n/100.
inline coord window_side(window_class c, std::size_t n, coord universe) {
  if (c == window_class::large) return universe / 10;
  auto root = static_cast<coord>(std::ceil(std::sqrt(static_cast<double>(std::max<std::size_t>(n, 1)))));
  return std::max<coord>(1, universe / root * 2);
}

inline std::vector<range_window> range_windows(std::size_t count, window_class c, std::size_t n, std::uint64_t seed,
                                               coord universe = default_universe) {
  rng_type rng(seed);
  coord side = window_side(c, n, universe);
  std::vector<range_window> out(count);
  for (auto& w : out) {
    coord x = uniform(rng, 0, universe - std::min(side, universe));
    coord y = uniform(rng, 0, universe - std::min(side, universe));
    w = {x, y, x + side, y + side};
  }
  return out;
}

inline std::vector<vertical_probe> vertical_probes(std::size_t count, window_class c, std::size_t n,
                                                   std::uint64_t seed, coord universe = default_universe) {
  rng_type rng(seed);
  coord side = window_side(c, n, universe);
  std::vector<vertical_probe> out(count);
  for (auto& q : out) {
    coord y = uniform(rng, 0, universe - std::min(side, universe));
    q = {uniform(rng, 0, universe), y, y + side};
  }
  return out;
}

inline std::vector<horizontal_probe> horizontal_probes(std::size_t count, window_class c, std::size_t n,
                                                       std::uint64_t seed, coord universe = default_universe) {
  rng_type rng(seed);
  coord side = window_side(c, n, universe);
  std::vector<horizontal_probe> out(count);
  for (auto& q : out) {
    coord x = uniform(rng, 0, universe - std::min(side, universe));
    q = {uniform(rng, 0, universe), x, x + side};
  }
  return out;
}

inline std::vector<stab_point> stab_points(std::size_t count, std::uint64_t seed, coord universe = default_universe) {
  rng_type rng(seed);
  std::vector<stab_point> out(count);
  for (auto& q : out) q = {uniform(rng, 0, universe), uniform(rng, 0, universe)};
  return out;
}

}  // namespace augmap::geo::gen
