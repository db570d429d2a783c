#pragma once

#include <cstdint>
#include <unordered_map>
#include <utility>

#include "entry.hpp"

namespace augmap {

// Polynomial hash of the in-order entry sequence modulo 2^61 - 1. Equal sequences hash
// equally regardless of tree shape. The memo is keyed by node address, so a cache must not
// outlive the trees it has seen.
class digest_cache {
 public:
  static constexpr std::uint64_t modulus = (std::uint64_t{1} << 61) - 1;
  static constexpr std::uint64_t base = 0x1f3a5c7e9b2d4f61ULL % ((std::uint64_t{1} << 61) - 1);

  static std::uint64_t mul(std::uint64_t a, std::uint64_t b) {
    unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
    std::uint64_t lo = static_cast<std::uint64_t>(p & modulus);
    std::uint64_t hi = static_cast<std::uint64_t>(p >> 61);
    std::uint64_t s = lo + hi;
    return s >= modulus ? s - modulus : s;
  }
  static std::uint64_t add(std::uint64_t a, std::uint64_t b) {
    std::uint64_t s = a + b;
    return s >= modulus ? s - modulus : s;
  }

  struct part {
    std::uint64_t hash = 0;   // sum of h_i * base^i
    std::uint64_t power = 1;  // base^length
  };

  template <class Node, class EntryHash>
  part of(const Node* t, const EntryHash& entry_hash) {
    if (!t) return {};
    auto it = memo_.find(t);
    if (it != memo_.end()) return it->second;
    part l = of(t->left.get(), entry_hash);
    part r = of(t->right.get(), entry_hash);
    std::uint64_t h = entry_hash(t->key, t->value) % modulus;
    part out;
    out.hash = add(l.hash, mul(l.power, add(h, mul(base, r.hash))));
    out.power = mul(mul(l.power, base), r.power);
    memo_.emplace(t, out);
    return out;
  }

  void clear() { memo_.clear(); }

 private:
  std::unordered_map<const void*, part> memo_;
};

template <class Map, class EntryHash>
std::uint64_t map_digest(const Map& m, const EntryHash& entry_hash, digest_cache& cache) {
  auto p = cache.of(m.root(), entry_hash);
  return mix64(p.hash ^ mix64(m.size()));
}

template <class Map, class EntryHash>
std::uint64_t map_digest(const Map& m, const EntryHash& entry_hash) {
  digest_cache cache;
  return map_digest(m, entry_hash, cache);
}

}  // namespace augmap
