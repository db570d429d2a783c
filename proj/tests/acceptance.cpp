// One line per acceptance criterion; exit status is nonzero when any line reads FAIL.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <augmap/aug_map.hpp>
#include <augmap/bench/workload.hpp>
#include <augmap/digest.hpp>
#include <augmap/geo/brute.hpp>
#include <augmap/geo/range_query.hpp>
#include <augmap/geo/rect_query.hpp>
#include <augmap/geo/seg_query.hpp>
#include <augmap/parallel.hpp>

#include <tbb/scalable_allocator.h>

#include "support/tree_audit.hpp"

using namespace augmap;
using namespace augmap::bench;
using geo::coord;

namespace {

enum class verdict { pass, fail, skip };

struct outcome {
  verdict v;
  std::string detail;
};

int failures = 0;

long resident_mb() {
  std::ifstream status("/proc/self/status");
  std::string line;
  while (std::getline(status, line))
    if (line.rfind("VmRSS:", 0) == 0) return std::stol(line.substr(6)) / 1024;
  return -1;
}

void report(int id, const char* title, const std::function<outcome()>& run) {
  auto t0 = std::chrono::steady_clock::now();
  outcome o;
  try {
    o = run();
  } catch (const std::exception& e) {
    o = {verdict::fail, std::string("exception: ") + e.what()};
  }
  double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const char* tag = o.v == verdict::pass ? "PASS" : o.v == verdict::fail ? "FAIL" : "SKIP";
  if (o.v == verdict::fail) ++failures;
  std::printf("%s %2d %s: %s [%.1f s]\n", tag, id, title, o.detail.c_str(), s);
  std::fflush(stdout);
  // Freed nodes stay cached by the allocator; hand them back before the next criterion.
  scalable_allocation_command(TBBMALLOC_CLEAN_ALL_BUFFERS, nullptr);
  std::fprintf(stderr, "resident after criterion %d: %ld MB\n", id, resident_mb());
}

outcome judged(bool ok, const std::ostringstream& detail) { return {ok ? verdict::pass : verdict::fail, detail.str()}; }

// 1. n = 10^4, 10^4 queries per structure split across both window classes.
outcome oracle_equivalence() {
  std::size_t bad = 0, total = 0;
  std::ostringstream d;
  for (const auto& s : structures()) {
    auto data = generate_dataset(s.data, 10000, 101, geo::default_universe);
    for (auto w : {geo::gen::window_class::small, geo::gen::window_class::large}) {
      run_options opt;
      opt.structure = std::string(s.name);
      opt.queries = 5000;
      opt.seed = w == geo::gen::window_class::small ? 102 : 103;
      opt.window = w;
      auto res = run_verify(opt, data, nullptr);
      total += opt.queries;
      bad += res.row.mismatches;
      if (res.row.mismatches) d << s.name << " " << res.first_divergence << "; ";
    }
  }
  d << structures().size() << " structures, " << total << " queries, " << bad << " mismatches";
  return judged(bad == 0, d);
}

// 2. Every probe on a small integer grid for instances of size 0..12.
std::vector<std::pair<coord, coord>> closed_spans(coord lo, coord hi) {
  std::vector<std::pair<coord, coord>> out;
  for (coord a = lo; a <= hi; ++a)
    for (coord b = a; b <= hi; ++b) out.emplace_back(a, b);
  return out;
}

dataset small_dataset(data_kind kind, std::size_t n, coord g, std::mt19937_64& rng) {
  std::uniform_int_distribution<coord> c(0, g);
  dataset d;
  d.kind = kind;
  auto id = [&] { return static_cast<std::uint32_t>(d.size()); };
  switch (kind) {
    case data_kind::points:
      for (std::size_t i = 0; i < n; ++i) d.points.push_back({c(rng), c(rng), 1 + static_cast<std::int64_t>(rng() % 3)});
      break;
    case data_kind::segments:
      for (int tries = 0; d.segments.size() < n && tries < 100000; ++tries) {
        auto s = geo::make_segment(c(rng), c(rng), c(rng), c(rng), id());
        bool clash = false;
        for (const auto& t : d.segments) clash = clash || geo::segments_intersect(s, t);
        if (!clash) d.segments.push_back(s);
      }
      break;
    case data_kind::vsegments:
      for (std::size_t i = 0; i < n; ++i) {
        coord x = c(rng);
        d.segments.push_back(geo::make_segment(x, c(rng), x, c(rng), id()));
      }
      break;
    case data_kind::rectangles:
      for (std::size_t i = 0; i < n; ++i) d.rectangles.push_back(geo::make_rectangle(c(rng), c(rng), c(rng), c(rng), id()));
      break;
  }
  return d;
}

query_set all_probes(query_kind kind, coord g) {
  query_set q;
  q.kind = kind;
  auto spans = closed_spans(-1, g + 1);
  for (coord at = -1; at <= g + 1; ++at) {
    switch (kind) {
      case query_kind::range:
        for (auto [ylo, yhi] : spans) q.windows.push_back({at, ylo, at, yhi});
        break;
      case query_kind::segment:
        for (auto [lo, hi] : spans) q.vertical.push_back({at, lo, hi});
        break;
      case query_kind::hsegment:
        for (auto [lo, hi] : spans) q.horizontal.push_back({at, lo, hi});
        break;
      case query_kind::stab:
        for (coord y = -1; y <= g + 1; ++y) q.stabs.push_back({at, y});
        break;
    }
  }
  if (kind == query_kind::range) {
    q.windows.clear();
    for (auto [xlo, xhi] : spans)
      for (auto [ylo, yhi] : spans) q.windows.push_back({xlo, ylo, xhi, yhi});
  }
  return q;
}

outcome exhaustive_small() {
  std::size_t bad = 0, checked = 0, instances = 0;
  std::ostringstream d;
  for (const auto& s : structures()) {
    coord g = s.data == data_kind::points ? 4 : 6;
    auto probes = all_probes(s.query, g);
    std::mt19937_64 rng(7);
    for (std::size_t n = 0; n <= 12; ++n)
      for (int rep = 0; rep < (n == 0 ? 1 : 4); ++rep) {
        auto data = small_dataset(s.data, n, g, rng);
        ++instances;
        for (std::size_t blocks : {std::size_t{1}, std::size_t{3}}) {
          auto e = build_engine(s, data, blocks);
          for (std::size_t i = 0; i < probes.size(); ++i) {
            ++checked;
            bool ok = e->count(probes, i) == oracle_count(s, data, probes, i);
            if (ok && s.lists) ok = e->list(probes, i) == oracle_list(s, data, probes, i);
            if (!ok && bad++ == 0) d << "first mismatch: " << s.name << " n=" << n << " probe " << i << "; ";
          }
        }
      }
  }
  d << instances << " instances, " << checked << " probe answers, " << bad << " mismatches";
  return judged(bad == 0, d);
}

// 3. Mixed operations against a std::map oracle with full structural checks.
template <class S>
std::size_t random_operations(std::uint64_t seed, std::size_t ops) {
  using M = aug_map<sum_entry<int, long>, S>;
  using T = typename M::tree_type;
  std::mt19937_64 rng(seed);
  std::map<int, long> oracle;
  M m;
  std::size_t violations = 0;
  auto plus = [](long a, long b) { return a + b; };
  auto audit = [&] {
    try {
      m.validate();
    } catch (const invariant_violation&) {
      ++violations;
    }
    if (!test_support::refcounts_match<typename M::node_type>({m.root()})) ++violations;
    long sum = 0;
    for (auto& [k, v] : oracle) sum += v;
    if (m.size() != oracle.size() || m.aug_val() != sum) ++violations;
  };
  const int universe = 20000;
  for (std::size_t step = 0; step < ops; ++step) {
    int k = static_cast<int>(rng() % universe);
    switch (rng() % 10) {
      case 0:
      case 1:
      case 2:
      case 3: {
        long v = static_cast<long>(rng() % 100);
        m = m.insert(k, v);
        oracle[k] = v;
        break;
      }
      case 4:
      case 5:
      case 6:
        m = m.erase(k);
        oracle.erase(k);
        break;
      case 7:
      case 8: {
        auto s = T::split(m.handle(), k);
        auto joined = s.found ? T::join(std::move(s.left), std::move(s.found), std::move(s.right))
                              : T::join2(std::move(s.left), std::move(s.right));
        m = M(std::move(joined));
        break;
      }
      default: {
        std::vector<std::pair<int, long>> es;
        std::size_t len = 1 + rng() % 64;
        for (std::size_t i = 0; i < len; ++i) es.emplace_back(static_cast<int>(rng() % universe), 1);
        auto other = M::build(es, plus);
        m = map_union(m, other, plus);
        for (auto& [key, v] : other.entries()) oracle[key] += v;
      }
    }
    if (step % 2500 == 0) audit();
  }
  audit();
  std::vector<std::pair<int, long>> want(oracle.begin(), oracle.end());
  if (m.entries() != want) ++violations;
  return violations;
}

outcome balance_invariants() {
  std::ostringstream d;
  std::size_t v[4] = {random_operations<avl>(1, 100000), random_operations<red_black>(2, 100000),
                      random_operations<weight_balanced>(3, 100000), random_operations<treap>(4, 100000)};
  d << "10^5 operations per scheme; violations avl " << v[0] << ", rb " << v[1] << ", wb " << v[2] << ", treap "
    << v[3];
  return judged(v[0] + v[1] + v[2] + v[3] == 0, d);
}

// 4. Joins of random-size trees built by mixed methods.
template <class S>
std::pair<std::size_t, std::int64_t> join_rank_trials(std::uint64_t seed, int trials) {
  using M = ordered_map<int, int, S>;
  using T = typename M::tree_type;
  std::mt19937_64 rng(seed);
  std::size_t violations = 0;
  std::int64_t worst_rotations = 0;
  auto make = [&](int lo, int count) {
    std::vector<std::pair<int, int>> es;
    for (int i = 0; i < count; ++i) es.emplace_back(lo + i, i);
    if (rng() % 2) return M::build(es);
    M m;
    std::shuffle(es.begin(), es.end(), rng);
    for (auto& [k, v] : es) m = m.insert(k, v);
    return m;
  };
  for (int t = 0; t < trials; ++t) {
    int a = static_cast<int>(rng() % 300), b = static_cast<int>(rng() % 300);
    if (t % 3 == 0) b = static_cast<int>(rng() % 4);
    if (t % 3 == 1) a = static_cast<int>(rng() % 4);
    auto l = make(0, a);
    auto r = make(a + 1, b);
    auto rot0 = rotation_counter().read();
    M joined(T::join(l.handle(), T::single(a, 0), r.handle()));
    worst_rotations = std::max(worst_rotations, rotation_counter().read() - rot0);
    if (joined.balance_rank() > 1 + std::max(l.balance_rank(), r.balance_rank())) ++violations;
    if (joined.size() != static_cast<std::size_t>(a + b + 1)) ++violations;
  }
  return {violations, worst_rotations};
}

outcome join_rank_bound() {
  auto [av, avl_rot] = join_rank_trials<avl>(11, 10000);
  auto [rb, rb_rot] = join_rank_trials<red_black>(12, 10000);
  auto [wb, wb_rot] = join_rank_trials<weight_balanced>(13, 10000);
  auto [tr, tr_rot] = join_rank_trials<treap>(14, 10000);
  (void)rb_rot, (void)wb_rot, (void)tr_rot;
  std::ostringstream d;
  d << "10^4 joins per scheme; rank violations " << av + rb + wb + tr << "; worst AVL rotations per join " << avl_rot
    << " (limit 2)";
  return judged(av + rb + wb + tr == 0 && avl_rot <= 2, d);
}

// 5. Allocation count of union(n1 = 10^5, n2) against n2 log(n1/n2 + 1).
outcome union_work() {
  using M = aug_map<sum_entry<int, long>, weight_balanced>;
  using stats = stats_of<sum_entry<int, long>>;
  const int n1 = 100000;
  std::vector<std::pair<int, long>> big;
  for (int i = 0; i < n1; ++i) big.emplace_back(i * 16, 1);
  auto m1 = M::build(big);
  std::mt19937_64 rng(21);
  double worst = 0;
  std::ostringstream d;
  for (int n2 : {10, 100, 1000, 10000, 100000}) {
    std::vector<std::pair<int, long>> small;
    while (static_cast<int>(small.size()) < n2) small.emplace_back(static_cast<int>(rng() % (n1 * 16)), 1);
    auto m2 = M::build(small);
    auto before = stats::allocated().read();
    auto u = map_union(m1, m2);
    auto allocs = static_cast<double>(stats::allocated().read() - before);
    double c = allocs / (m2.size() * std::log2(static_cast<double>(n1) / m2.size() + 1));
    worst = std::max(worst, c);
    d << "n2=" << n2 << " C=" << std::fixed << std::setprecision(2) << c << "; ";
  }
  d << "worst C " << worst << " (limit 8)";
  return judged(worst <= 8.0, d);
}

// 6. Prefix digests for blocks in {2, 8, 64} against blocks = 1.
auto entry_hash = [](const auto& k, const auto& v) {
  std::uint64_t h = mix64(static_cast<std::uint64_t>(k.id) * 0x9e3779b97f4a7c15ULL ^ static_cast<std::uint64_t>(v));
  if constexpr (requires { k.closing; }) h = mix64(h + k.closing + 1);
  return h;
};

template <class Prefixes>
std::vector<std::uint64_t> serialize(const Prefixes& ps) {
  digest_cache cache;
  std::vector<std::uint64_t> out;
  out.reserve(ps.size());
  for (const auto& t : ps.prefixes()) out.push_back(map_digest(t, entry_hash, cache));
  return out;
}

outcome sweep_equivalence() {
  const std::size_t n = 100000;
  std::size_t bad = 0, runs = 0;
  std::ostringstream d;
  auto check = [&](const char* name, auto build) {
    auto want = build(std::size_t{1});
    for (std::size_t blocks : {2, 8, 64}) {
      ++runs;
      if (build(blocks) != want) {
        ++bad;
        d << name << " blocks=" << blocks << " differs; ";
      }
    }
  };
  auto pts = geo::gen::points(n, 31);
  check("range counting", [&](std::size_t b) {
    return serialize(geo::range_sweep<>::build(pts, b, geo::sweep_variant::counting).counting());
  });
  check("range reporting", [&](std::size_t b) {
    return serialize(geo::range_sweep<>::build(pts, b, geo::sweep_variant::reporting).reporting());
  });
  auto segs = geo::gen::segments(n, 32);
  check("segment sets", [&](std::size_t b) { return serialize(geo::seg_sweep<>::build(segs, b).structure().prefixes()); });
  auto vsegs = geo::gen::vertical_segments(n, 33);
  check("vertical flags", [&](std::size_t b) { return serialize(geo::seg_count_sweep<>::build(vsegs, b).prefixes()); });
  auto rects = geo::gen::rectangles(n, 34);
  check("rectangle intervals",
        [&](std::size_t b) { return serialize(geo::rect_sweep<>::build(rects, b).structure().prefixes()); });
  check("rectangle flags",
        [&](std::size_t b) { return serialize(geo::rect_count_sweep<>::build(rects, b).structure().prefixes()); });
  d << runs << " parallel runs over 6 sweep schemes at n=10^5, " << bad << " differ from blocks=1";
  return judged(bad == 0, d);
}

// 7.
outcome space_claim() {
  std::ostringstream d;
  bool ok = true;
  for (std::size_t n : {10000, 100000, 1000000}) {
    auto pts = geo::gen::points(n, 41 + n);
    auto rs = geo::range_sweep<>::build(pts, worker_count(), geo::sweep_variant::counting);
    double nlogn = n * std::log2(static_cast<double>(n));
    double ratio = rs.node_count() / nlogn;
    ok = ok && ratio <= 1.5;
    d << "n=" << n << " nodes " << rs.node_count() << " = " << std::fixed << std::setprecision(3) << ratio
      << " n log2 n; ";
  }
  d << "limit 1.5";
  return judged(ok, d);
}

// 8. Median-of-3 build time at 10^5 and 10^6, each size in its own bench process so one
// structure's freed pages cannot crowd the next at the 10^6 scale.
double bench_build_ms(std::string_view structure, std::size_t n) {
  std::string cmd = std::string(AUGMAP_CLI_PATH) + " bench --structure " + std::string(structure) + " --n " +
                    std::to_string(n) + " --seed 51 --queries 1";
  std::unique_ptr<FILE, int (*)(FILE*)> pipe(popen(cmd.c_str(), "r"), pclose);
  if (!pipe) throw std::runtime_error("cannot run " + cmd);
  char line[512];
  while (std::fgets(line, sizeof line, pipe.get())) {
    std::string row(line);
    if (row.find(",build,") == std::string::npos) continue;
    std::istringstream fields(row);
    std::string cell;
    for (int i = 0; i < 5; ++i) std::getline(fields, cell, ',');
    return std::stod(cell);
  }
  throw std::runtime_error("no build row from " + cmd);
}

// A 10^5 build takes a few hundred ms and wanders by about 15% between processes, so that
// side is the median over three processes (nine builds in all).
double small_build_ms(std::string_view structure) {
  std::array<double, 3> t{};
  for (auto& x : t) x = bench_build_ms(structure, 100000);
  std::sort(t.begin(), t.end());
  return t[1];
}

outcome scaling_shape() {
  std::ostringstream d;
  bool ok = true;
  for (const auto& s : structures()) {
    double ratio = bench_build_ms(s.name, 1000000) / small_build_ms(s.name);
    bool in = ratio >= 8 && ratio <= 16;
    ok = ok && in;
    d << s.name << " " << std::fixed << std::setprecision(1) << ratio << (in ? "" : " (out)") << "; ";
  }
  d << "band [8, 16]";
  return judged(ok, d);
}

// 9.
outcome speedup() {
  std::size_t cores = hardware_threads();
  std::ostringstream d;
  if (cores < 4) {
    d << "machine exposes " << cores << " hardware thread" << (cores == 1 ? "" : "s")
      << "; the check needs at least 4 cores";
    return {verdict::skip, d.str()};
  }
  auto data = generate_dataset(data_kind::points, 1000000, 61, geo::default_universe);
  auto rows_at = [&](std::size_t threads) {
    run_options opt;
    opt.structure = "range-tree";
    opt.threads = threads;
    opt.queries = 20000;
    return run_bench(opt, data, nullptr);
  };
  auto one = rows_at(1);
  auto four = rows_at(4);
  double build = one[0].wall_time_ms / four[0].wall_time_ms;
  // Query rows alternate threads 1 and 4 within one run.
  double query = four[1].wall_time_ms / four[2].wall_time_ms;
  d << "range-tree build " << std::fixed << std::setprecision(2) << build << "x (limit 2), count queries " << query
    << "x (limit 3)";
  return judged(build >= 2 && query >= 3, d);
}

// 10.
outcome lazy_updates() {
  auto pts = geo::gen::points(10000, 71, 1000000);
  auto rt = geo::range_tree<weight_balanced>::build(pts);
  auto extra = geo::gen::points(1000, 72, 1000000);
  using inner = stats_of<geo::weight_by_y>;
  auto before = inner::allocated().read();
  auto all = pts;
  for (const auto& p : extra) {
    rt = rt.lazy_insert(p);
    all.push_back(p);
  }
  double per_update = static_cast<double>(inner::allocated().read() - before) / extra.size();
  double log_n = std::log2(static_cast<double>(all.size()));
  double c = per_update / (log_n * log_n);
  std::size_t bad = 0;
  auto windows = geo::gen::range_windows(2000, geo::gen::window_class::large, all.size(), 73, 1000000);
  auto small = geo::gen::range_windows(2000, geo::gen::window_class::small, all.size(), 74, 1000000);
  windows.insert(windows.end(), small.begin(), small.end());
  for (std::size_t i = 0; i < windows.size(); ++i) {
    if (rt.count(windows[i]) != geo::brute::range_count(all, windows[i])) ++bad;
    if (i % 4 == 0 && rt.list(windows[i]) != geo::brute::range_list(all, windows[i])) ++bad;
  }
  std::ostringstream d;
  d << "1000 lazy inserts at n=10^4: " << std::fixed << std::setprecision(1) << per_update
    << " inner nodes per update = " << std::setprecision(3) << c << " log^2 n (limit 4); " << bad
    << " oracle mismatches over " << windows.size() << " windows";
  return judged(c <= 4 && bad == 0, d);
}

// 11. Snapshots taken before 10^3 updates keep their answers and contents.
outcome persistence() {
  auto pts = geo::gen::points(20000, 81);
  auto rt = geo::range_tree<>::build(pts);
  auto rs = geo::range_sweep<>::build(pts, worker_count());
  auto windows = geo::gen::range_windows(1000, geo::gen::window_class::large, pts.size(), 82);
  auto answers = [&](const geo::range_tree<>& t) {
    std::uint64_t h = 0;
    for (const auto& w : windows) {
      h = mix64(h ^ static_cast<std::uint64_t>(t.count(w)));
      for (const auto& k : t.list(w)) h = mix64(h ^ k.id);
    }
    return h;
  };
  auto key_hash = [](const geo::point_key& k, const auto&) { return mix64(k.id); };
  const auto snapshot = rt;
  const auto before_answers = answers(snapshot);
  const auto before_outer = map_digest(snapshot.outer(), key_hash);
  const auto sweep_prefix = rs.counting().at(rs.counting().size() / 2);
  const auto sweep_digest = map_digest(sweep_prefix, key_hash);

  auto extra = geo::gen::points(1000, 83);
  for (const auto& p : extra) rt = rt.lazy_insert(p);
  auto current = rs.counting().at(rs.counting().size() / 2);
  std::mt19937_64 rng(84);
  for (int i = 0; i < 1000; ++i) {
    auto k = current.select(rng() % current.size()).first;
    current = current.erase(k);
  }
  bool ok = answers(snapshot) == before_answers && map_digest(snapshot.outer(), key_hash) == before_outer &&
            map_digest(sweep_prefix, key_hash) == sweep_digest && answers(rt) != before_answers;
  std::ostringstream d;
  d << "range-tree snapshot over 1000 lazy inserts and sweep prefix over 1000 deletions: answer and content digests "
    << (ok ? "unchanged" : "changed");
  return judged(ok, d);
}

}  // namespace

int main() {
  std::printf("acceptance run on %zu hardware thread(s)\n", hardware_threads());
  report(1, "oracle equivalence", oracle_equivalence);
  report(2, "exhaustive small cases", exhaustive_small);
  report(3, "balance and augmentation invariants", balance_invariants);
  report(4, "join rank bound", join_rank_bound);
  report(5, "union work bound", union_work);
  report(6, "parallel sweep equals sequential", sweep_equivalence);
  report(7, "range sweep space", space_claim);
  report(8, "build time scaling", scaling_shape);
  report(9, "parallel speedup", speedup);
  report(10, "lazy updates", lazy_updates);
  report(11, "persistence", persistence);
  return failures == 0 ? 0 : 1;
}
