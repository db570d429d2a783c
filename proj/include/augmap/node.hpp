#pragma once

#include <atomic>
#include <cstdint>
#include <new>
#include <utility>
#include <vector>

#include <tbb/scalable_allocator.h>

#include "counters.hpp"
#include "entry.hpp"

namespace augmap {

template <class E>
struct node;

template <class E>
void release_node(node<E>* n) noexcept;

// Intrusive reference-counted handle; copying shares, moving transfers.
template <class E>
class node_ptr {
 public:
  using node_type = node<E>;

  node_ptr() = default;
  node_ptr(std::nullptr_t) {}
  static node_ptr adopt(node_type* p) noexcept {
    node_ptr r;
    r.p_ = p;
    return r;
  }
  node_ptr(const node_ptr& o) noexcept : p_(o.p_) {
    if (p_) p_->refs.fetch_add(1, std::memory_order_relaxed);
  }
  node_ptr(node_ptr&& o) noexcept : p_(std::exchange(o.p_, nullptr)) {}
  node_ptr& operator=(node_ptr o) noexcept {
    std::swap(p_, o.p_);
    return *this;
  }
  ~node_ptr() {
    if (p_) release_node(p_);
  }

  node_type* get() const noexcept { return p_; }
  node_type* operator->() const noexcept { return p_; }
  node_type& operator*() const noexcept { return *p_; }
  explicit operator bool() const noexcept { return p_ != nullptr; }
  node_type* detach() noexcept { return std::exchange(p_, nullptr); }
  // True when this handle holds the only reference, so the node may be reused in place.
  bool unique() const noexcept { return p_ && p_->refs.load(std::memory_order_acquire) == 1; }

  friend bool operator==(const node_ptr& a, const node_ptr& b) { return a.p_ == b.p_; }

 private:
  node_type* p_ = nullptr;
};

template <class E>
struct node {
  using policy = E;
  using key_type = typename E::key_t;
  using value_type = typename E::val_t;
  using aug_type = aug_type_t<E>;

  node(key_type k, value_type v) : key(std::move(k)), value(std::move(v)) {}

  node_ptr<E> left;
  node_ptr<E> right;
  std::uint32_t size = 1;
  // Scheme metadata: AVL height, RB color and black height, treap priority.
  std::uint32_t meta = 0;
  std::atomic<std::uint32_t> refs{1};
  key_type key;
  value_type value;
  [[no_unique_address]] aug_type aug{};
};

template <class E>
using stats_of = node_stats<node<E>>;

template <class E>
node_ptr<E> allocate_node(typename E::key_t key, typename E::val_t value) {
  using N = node<E>;
  void* mem = alignof(N) > 16 ? scalable_aligned_malloc(sizeof(N), alignof(N))
                              : scalable_malloc(sizeof(N));
  if (!mem) throw std::bad_alloc();
  N* n;
  try {
    n = new (mem) N(std::move(key), std::move(value));
  } catch (...) {
    alignof(N) > 16 ? scalable_aligned_free(mem) : scalable_free(mem);
    throw;
  }
  stats_of<E>::allocated().add();
  all_node_stats::allocated().add();
  return node_ptr<E>::adopt(n);
}

namespace detail {
template <class E>
void destroy_node(node<E>* n) noexcept {
  using N = node<E>;
  n->~N();
  alignof(N) > 16 ? scalable_aligned_free(n) : scalable_free(n);
  stats_of<E>::freed().add();
  all_node_stats::freed().add();
}
}  // namespace detail

// Frees every node whose count reaches zero using an explicit worklist.
template <class E>
void release_node(node<E>* n) noexcept {
  using N = node<E>;
  if (n->refs.fetch_sub(1, std::memory_order_acq_rel) != 1) return;
  constexpr std::size_t inline_cap = 128;
  N* inline_stack[inline_cap];
  std::size_t top = 0;
  std::vector<N*> spill;
  auto dying = [](N* c) { return c && c->refs.fetch_sub(1, std::memory_order_acq_rel) == 1; };
  N* cur = n;
  while (cur) {
    N* l = cur->left.detach();
    N* r = cur->right.detach();
    detail::destroy_node(cur);
    N* next = nullptr;
    if (dying(l)) next = l;
    if (dying(r)) {
      if (!next) {
        next = r;
      } else if (top < inline_cap) {
        inline_stack[top++] = r;
      } else {
        spill.push_back(r);
      }
    }
    if (!next) {
      if (!spill.empty()) {
        next = spill.back();
        spill.pop_back();
      } else if (top > 0) {
        next = inline_stack[--top];
      }
    }
    cur = next;
  }
}

}  // namespace augmap
