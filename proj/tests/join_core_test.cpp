#include <doctest.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include <augmap/aug_map.hpp>

#include "support/tree_audit.hpp"

using namespace augmap;

namespace {

template <class S>
using int_map = ordered_map<int, int, S>;

template <class S>
using int_tree = tree<plain_entry<int, int>, S>;

template <class S>
std::vector<int> keys_of(const int_map<S>& m) {
  return m.keys();
}

template <class S>
int_map<S> from_keys(const std::vector<int>& ks) {
  std::vector<std::pair<int, int>> es;
  for (int k : ks) es.emplace_back(k, k * 10);
  return int_map<S>::build(es);
}

template <class S>
int_map<S> insert_in_order(const std::vector<int>& ks) {
  int_map<S> m;
  for (int k : ks) m = m.insert(k, k * 10);
  return m;
}

template <class S>
typename int_tree<S>::ptr join_keys(const int_map<S>& l, int k, const int_map<S>& r) {
  return int_tree<S>::join(l.handle(), int_tree<S>::single(k, k * 10), r.handle());
}

std::vector<int> iota_vec(int lo, int hi) {
  std::vector<int> v(hi - lo);
  std::iota(v.begin(), v.end(), lo);
  return v;
}

}  // namespace

#define ALL_SCHEMES avl, red_black, weight_balanced, treap

TEST_CASE_TEMPLATE("join of two empty trees is a singleton", S, ALL_SCHEMES) {
  auto t = int_map<S>(join_keys<S>({}, 5, {}));
  CHECK(keys_of(t) == std::vector<int>{5});
  t.validate();
}

TEST_CASE_TEMPLATE("join concatenates in order and stays balanced", S, ALL_SCHEMES) {
  auto t = int_map<S>(join_keys<S>(from_keys<S>({1, 2}), 3, from_keys<S>({4, 5})));
  CHECK(keys_of(t) == std::vector<int>{1, 2, 3, 4, 5});
  t.validate();
}

TEST_CASE_TEMPLATE("join of lopsided trees in all size combinations", S, ALL_SCHEMES) {
  for (int a = 0; a <= 40; ++a) {
    for (int b = 0; b <= 40; b += (b < 10 ? 1 : 7)) {
      auto l = from_keys<S>(iota_vec(0, a));
      auto r = from_keys<S>(iota_vec(a + 1, a + 1 + b));
      auto l_before = keys_of(l);
      auto t = int_map<S>(join_keys<S>(l, a, r));
      REQUIRE(keys_of(t) == iota_vec(0, a + b + 1));
      t.validate();
      CHECK(keys_of(l) == l_before);
      l.validate();
      r.validate();
    }
  }
}

TEST_CASE("AVL join work is proportional to the height difference") {
  // Perfect trees of heights 6 and 2 (63 and 3 nodes).
  auto big = from_keys<avl>(iota_vec(0, 63));
  auto small = from_keys<avl>(iota_vec(100, 103));
  REQUIRE(avl::height(big.root()) == 6);
  REQUIRE(avl::height(small.root()) == 2);
  auto before = stats_of<plain_entry<int, int>>::allocated().read();
  auto t = int_map<avl>(join_keys<avl>(big, 50 + 20, small));
  auto copied = stats_of<plain_entry<int, int>>::allocated().read() - before;
  // The middle node plus path copies of the right spine below the root.
  CHECK(copied >= 1);
  CHECK(copied <= 2 * (6 - 2) + 3);
  t.validate();
}

TEST_CASE_TEMPLATE("split separates keys around the pivot", S, ALL_SCHEMES) {
  using T = int_tree<S>;
  auto m = from_keys<S>({1, 3, 5});
  {
    auto s = T::split(m.handle(), 3);
    CHECK(int_map<S>(std::move(s.left)).keys() == std::vector<int>{1});
    REQUIRE(s.found);
    CHECK(s.found->value == 30);
    CHECK(int_map<S>(std::move(s.right)).keys() == std::vector<int>{5});
  }
  {
    auto s = T::split(m.handle(), 4);
    auto l = int_map<S>(std::move(s.left));
    auto r = int_map<S>(std::move(s.right));
    CHECK(l.keys() == std::vector<int>{1, 3});
    CHECK_FALSE(s.found);
    CHECK(r.keys() == std::vector<int>{5});
    l.validate();
    r.validate();
  }
  {
    auto s = T::split(nullptr, 7);
    CHECK_FALSE(s.left);
    CHECK_FALSE(s.found);
    CHECK_FALSE(s.right);
  }
  CHECK(m.keys() == std::vector<int>{1, 3, 5});
}

TEST_CASE_TEMPLATE("split matches a filter oracle on random trees", S, ALL_SCHEMES) {
  using T = int_tree<S>;
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    std::set<int> keys;
    int n = static_cast<int>(rng() % 300);
    while (static_cast<int>(keys.size()) < n) keys.insert(static_cast<int>(rng() % 1000));
    auto m = from_keys<S>({keys.begin(), keys.end()});
    int pivot = static_cast<int>(rng() % 1000);
    auto s = T::split(m.handle(), pivot);
    std::vector<int> lo, hi;
    for (int k : keys) (k < pivot ? lo : hi).push_back(k);
    if (!hi.empty() && hi.front() == pivot) hi.erase(hi.begin());
    auto l = int_map<S>(std::move(s.left));
    auto r = int_map<S>(std::move(s.right));
    CHECK(l.keys() == lo);
    CHECK(r.keys() == hi);
    CHECK(static_cast<bool>(s.found) == keys.count(pivot) > 0);
    l.validate();
    r.validate();
  }
}

TEST_CASE_TEMPLATE("join2 concatenates", S, ALL_SCHEMES) {
  using T = int_tree<S>;
  auto t = from_keys<S>({4, 9});
  CHECK(int_map<S>(T::join2(nullptr, t.handle())).keys() == t.keys());
  auto c = int_map<S>(T::join2(from_keys<S>({1, 2}).handle(), from_keys<S>({3, 4}).handle()));
  CHECK(c.keys() == std::vector<int>{1, 2, 3, 4});
  c.validate();
  auto d = int_map<S>(T::join2(from_keys<S>({1}).handle(), from_keys<S>({2}).handle()));
  CHECK(d.keys() == std::vector<int>{1, 2});
  d.validate();
  for (int a = 0; a < 30; ++a) {
    for (int b = 0; b < 30; ++b) {
      auto j = int_map<S>(T::join2(from_keys<S>(iota_vec(0, a)).handle(), from_keys<S>(iota_vec(a, a + b)).handle()));
      REQUIRE(j.keys() == iota_vec(0, a + b));
      j.validate();
    }
  }
}

TEST_CASE_TEMPLATE("insert and delete", S, ALL_SCHEMES) {
  int_map<S> empty;
  auto one = empty.insert(7, 70);
  CHECK(one.keys() == std::vector<int>{7});
  auto d = from_keys<S>({1, 2, 3}).erase(2);
  CHECK(d.keys() == std::vector<int>{1, 3});
  d.validate();
  auto base = from_keys<S>({1, 5, 9, 13});
  auto round = base.insert(6, 60).erase(6);
  CHECK(round.entries() == base.entries());
  CHECK(base.erase(4).entries() == base.entries());
  auto replaced = base.insert(5, -1);
  CHECK(replaced.find(5) == -1);
  CHECK(base.find(5) == 50);
}

TEST_CASE_TEMPLATE("insert allocates a logarithmic number of nodes", S, ALL_SCHEMES) {
  auto m = from_keys<S>(iota_vec(0, 1 << 14));
  auto before = stats_of<plain_entry<int, int>>::allocated().read();
  auto m2 = m.insert(1 << 20, 0);
  auto copied = stats_of<plain_entry<int, int>>::allocated().read() - before;
  CHECK(copied <= 8 * 15);
  m2.validate();
}

TEST_CASE_TEMPLATE("find agrees with a sorted-array oracle", S, ALL_SCHEMES) {
  int_map<S> empty;
  CHECK_FALSE(empty.find(3).has_value());
  auto ab = int_map<S>::build({{1, 'a'}, {2, 'b'}});
  CHECK(ab.find(2) == 'b');

  std::mt19937_64 rng(3);
  std::vector<int> keys;
  for (int i = 0; i < 5000; ++i) keys.push_back(static_cast<int>(rng() % 20000));
  auto m = from_keys<S>(keys);
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  for (int i = 0; i < 10000; ++i) {
    int q = static_cast<int>(rng() % 20000);
    bool present = std::binary_search(keys.begin(), keys.end(), q);
    auto got = m.find(q);
    REQUIRE(got.has_value() == present);
    if (present) CHECK(*got == q * 10);
  }
}

TEST_CASE("rank conventions") {
  CHECK(int_map<avl>().balance_rank() == 0);
  CHECK(int_map<red_black>().balance_rank() == 0);
  CHECK(int_map<weight_balanced>().balance_rank() == 0);
  CHECK(int_map<treap>().balance_rank() == 0);
  // Height in edges.
  CHECK(from_keys<avl>({1, 2, 3}).balance_rank() == 1);
  CHECK(from_keys<avl>({1}).balance_rank() == 0);
  // floor(log2(size + 1)).
  CHECK(from_keys<weight_balanced>({1, 2, 3}).balance_rank() == 2);
  CHECK(from_keys<weight_balanced>(iota_vec(0, 6)).balance_rank() == 2);
  CHECK(from_keys<weight_balanced>(iota_vec(0, 7)).balance_rank() == 3);
}

TEST_CASE_TEMPLATE("join rank bound over random instances", S, ALL_SCHEMES) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 2000; ++trial) {
    int a = static_cast<int>(rng() % 200), b = static_cast<int>(rng() % 200);
    if (trial % 3 == 0) b = static_cast<int>(rng() % 5);
    auto l = insert_in_order<S>(iota_vec(0, a));
    auto r = from_keys<S>(iota_vec(a + 1, a + 1 + b));
    auto rot0 = rotation_counter().read();
    auto t = int_map<S>(join_keys<S>(l, a, r));
    auto rotations = rotation_counter().read() - rot0;
    REQUIRE(t.balance_rank() <= 1 + std::max(l.balance_rank(), r.balance_rank()));
    REQUIRE(t.balance_rank() >= std::max(l.balance_rank(), r.balance_rank()));
    if constexpr (std::is_same_v<S, avl>) REQUIRE(rotations <= 2);
  }
}

TEST_CASE_TEMPLATE("random operation sequences keep every invariant", S, ALL_SCHEMES) {
  std::mt19937_64 rng(5);
  std::map<int, int> oracle;
  int_map<S> m;
  for (int step = 0; step < 3000; ++step) {
    int k = static_cast<int>(rng() % 500);
    switch (rng() % 4) {
      case 0:
      case 1:
        m = m.insert(k, step);
        oracle[k] = step;
        break;
      case 2:
        m = m.erase(k);
        oracle.erase(k);
        break;
      default: {
        using T = int_tree<S>;
        auto s = T::split(m.handle(), k);
        auto joined = s.found ? T::join(std::move(s.left), std::move(s.found), std::move(s.right))
                              : T::join2(std::move(s.left), std::move(s.right));
        m = int_map<S>(std::move(joined));
      }
    }
    if (step % 50 == 0) {
      m.validate();
      REQUIRE(test_support::refcounts_match<typename int_map<S>::node_type>({m.root()}));
    }
    REQUIRE(m.size() == oracle.size());
  }
  m.validate();
  std::vector<std::pair<int, int>> want(oracle.begin(), oracle.end());
  CHECK(m.entries() == want);
}

TEST_CASE_TEMPLATE("old versions survive later updates", S, ALL_SCHEMES) {
  std::mt19937_64 rng(9);
  std::vector<int_map<S>> versions;
  std::vector<std::vector<std::pair<int, int>>> snapshots;
  int_map<S> m;
  for (int step = 0; step < 600; ++step) {
    int k = static_cast<int>(rng() % 200);
    m = (rng() % 3 == 0) ? m.erase(k) : m.insert(k, step);
    if (step % 20 == 0) {
      versions.push_back(m);
      snapshots.push_back(m.entries());
    }
  }
  for (std::size_t i = 0; i < versions.size(); ++i) {
    CHECK(versions[i].entries() == snapshots[i]);
    versions[i].validate();
  }
  std::vector<const typename int_map<S>::node_type*> roots;
  for (auto& v : versions) roots.push_back(v.root());
  roots.push_back(m.root());
  CHECK(test_support::refcounts_match(roots));
}

TEST_CASE("treap shape depends only on the key set") {
  auto keys = iota_vec(0, 500);
  auto a = insert_in_order<treap>(keys);
  std::mt19937_64 rng(1);
  std::shuffle(keys.begin(), keys.end(), rng);
  auto b = insert_in_order<treap>(keys);
  auto c = from_keys<treap>(keys);
  CHECK(test_support::same_shape(a.root(), b.root()));
  CHECK(test_support::same_shape(a.root(), c.root()));
}

TEST_CASE("seeded random treap priorities keep the heap order") {
  treap_priorities::use_seeded_random(1234);
  auto m = insert_in_order<treap>(iota_vec(0, 1000));
  treap_priorities::use_hashed();
  m.validate();
  auto m2 = m.insert(5000, 1).erase(17);
  m2.validate();
}

TEST_CASE_TEMPLATE("join rejects misordered operands", S, ALL_SCHEMES) {
  using T = int_tree<S>;
  auto l = from_keys<S>({1, 2, 8});
  auto r = from_keys<S>({10, 11});
  CHECK_THROWS_AS(T::join(l.handle(), T::single(5, 0), r.handle()), invariant_violation);
  CHECK_THROWS_AS(T::join(r.handle(), T::single(9, 0), l.handle()), invariant_violation);
  CHECK_THROWS_AS(T::join(l.handle(), T::single(10, 0), r.handle()), invariant_violation);
  CHECK(l.keys() == std::vector<int>{1, 2, 8});
}

TEST_CASE_TEMPLATE("dropping a long chain of versions frees every node", S, ALL_SCHEMES) {
  auto live0 = stats_of<plain_entry<int, int>>::live();
  {
    auto m = from_keys<S>(iota_vec(0, 200000));
    auto m2 = m.erase(5).insert(-1, 0);
    CHECK(stats_of<plain_entry<int, int>>::live() - live0 >= 200000);
  }
  CHECK(stats_of<plain_entry<int, int>>::live() == live0);
}
