#pragma once

#include <cstdint>
#include <string_view>

namespace augmap {

enum class balance_scheme { avl, red_black, weight_balanced, treap };

constexpr std::string_view scheme_name(balance_scheme s) {
  switch (s) {
    case balance_scheme::avl: return "avl";
    case balance_scheme::red_black: return "rb";
    case balance_scheme::weight_balanced: return "wb";
    case balance_scheme::treap: return "treap";
  }
  return "?";
}

inline std::uint32_t floor_log2(std::uint64_t v) {
  return v == 0 ? 0 : 63u - static_cast<std::uint32_t>(__builtin_clzll(v));
}

}  // namespace augmap
