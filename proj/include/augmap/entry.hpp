#pragma once

#include <concepts>
#include <cstdint>
#include <functional>
#include <type_traits>
#include <utility>

namespace augmap {

// An entry policy names key/value types and a strict weak order on keys.
template <class E>
concept entry_policy = requires(const typename E::key_t& a, const typename E::key_t& b) {
  typename E::val_t;
  { E::comp(a, b) } -> std::convertible_to<bool>;
};

// Augmented policies add (aug_t, get_empty, from_entry, combine); combine is associative
// with get_empty() as identity.
template <class E>
concept augmented_policy =
    entry_policy<E> &&
    requires(const typename E::key_t& k, const typename E::val_t& v, const typename E::aug_t& a) {
      { E::get_empty() } -> std::convertible_to<typename E::aug_t>;
      { E::from_entry(k, v) } -> std::convertible_to<typename E::aug_t>;
      { E::combine(a, a) } -> std::convertible_to<typename E::aug_t>;
    };

// Optional hook computing a node's augmented value from its children and entry in one step.
template <class E>
concept has_node_aug =
    augmented_policy<E> &&
    requires(const typename E::aug_t& a, const typename E::key_t& k, const typename E::val_t& v) {
      { E::node_aug(a, k, v, a) } -> std::convertible_to<typename E::aug_t>;
    };

struct no_aug {
  friend constexpr bool operator==(no_aug, no_aug) { return true; }
};

namespace detail {
template <class E, bool = augmented_policy<E>>
struct aug_type_of {
  using type = no_aug;
};
template <class E>
struct aug_type_of<E, true> {
  using type = typename E::aug_t;
};
}  // namespace detail

template <class E>
using aug_type_t = typename detail::aug_type_of<E>::type;

inline constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

template <class K>
std::uint64_t hash_value(const K& k);

template <class A, class B>
std::uint64_t hash_value(const std::pair<A, B>& p) {
  return mix64(hash_value(p.first) * 0x9e3779b97f4a7c15ULL ^ hash_value(p.second));
}

template <class K>
std::uint64_t hash_value(const K& k) {
  if constexpr (std::is_integral_v<K> || std::is_enum_v<K>) {
    return static_cast<std::uint64_t>(k);
  } else {
    return std::hash<K>{}(k);
  }
}

// Deterministic 64-bit key hash: E::hash if provided, else a mix of the key's hash value.
template <class E>
std::uint64_t key_hash(const typename E::key_t& k) {
  if constexpr (requires { { E::hash(k) } -> std::convertible_to<std::uint64_t>; }) {
    return mix64(E::hash(k));
  } else {
    return mix64(hash_value(k));
  }
}

// Value combiners for duplicate keys; first argument is the existing value.
struct keep_last {
  template <class V>
  const V& operator()(const V&, const V& incoming) const { return incoming; }
};
struct keep_first {
  template <class V>
  const V& operator()(const V& existing, const V&) const { return existing; }
};

}  // namespace augmap
