#include <algorithm>
#include <chrono>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <augmap/bench/workload.hpp>
#include <augmap/entry.hpp>
#include <augmap/errors.hpp>
#include <augmap/parallel.hpp>

namespace augmap::bench {

namespace {

using clock_type = std::chrono::steady_clock;

double elapsed_ms(clock_type::time_point since) {
  return std::chrono::duration<double, std::milli>(clock_type::now() - since).count();
}

double per_second(std::size_t items, double ms) { return ms > 0 ? static_cast<double>(items) * 1000.0 / ms : 0.0; }

std::uint64_t ids_digest(const std::vector<std::uint32_t>& ids) {
  std::uint64_t h = mix64(ids.size());
  for (auto id : ids) h = mix64(h ^ id);
  return h;
}

std::string describe(const query_set& q, std::size_t i) {
  std::ostringstream s;
  s << "query " << i << " (";
  switch (q.kind) {
    case query_kind::range: {
      const auto& w = q.windows[i];
      s << w.x_lo << ' ' << w.y_lo << ' ' << w.x_hi << ' ' << w.y_hi;
      break;
    }
    case query_kind::segment: s << q.vertical[i].at << ' ' << q.vertical[i].y_lo << ' ' << q.vertical[i].y_hi; break;
    case query_kind::hsegment:
      s << q.horizontal[i].at << ' ' << q.horizontal[i].x_lo << ' ' << q.horizontal[i].x_hi;
      break;
    case query_kind::stab: s << q.stabs[i].x << ' ' << q.stabs[i].y; break;
  }
  s << ')';
  return s.str();
}

std::string show(const std::vector<std::uint32_t>& ids) {
  std::ostringstream s;
  s << '[';
  for (std::size_t i = 0; i < ids.size() && i < 8; ++i) s << (i ? " " : "") << ids[i];
  if (ids.size() > 8) s << " ... (" << ids.size() << " ids)";
  s << ']';
  return s.str();
}

const structure_info& checked_structure(const run_options& opt, const dataset& d, const query_set* queries) {
  const auto& s = find_structure(opt.structure);
  if (d.kind != s.data)
    throw argument_error(std::string(s.name) + " needs a " + std::string(name_of(s.data)) + " dataset, got " +
                         std::string(name_of(d.kind)));
  if (queries && queries->kind != s.query)
    throw argument_error(std::string(s.name) + " answers " + std::string(name_of(s.query)) + " queries, got " +
                         std::string(name_of(queries->kind)));
  if (opt.threads < 1) throw argument_error("threads must be at least 1");
  return s;
}

struct batch {
  std::string phase;
  query_set queries;
  bool listing;
};

// One answer digest per query, computed on `threads` workers.
std::vector<std::uint64_t> run_batch(const engine& e, const batch& b, std::size_t threads, double& ms) {
  std::vector<std::uint64_t> out(b.queries.size());
  thread_limit limit(threads);
  auto t0 = clock_type::now();
  parallel_for(out.size(), [&](std::size_t i) {
    out[i] = b.listing ? ids_digest(e.list(b.queries, i)) : static_cast<std::uint64_t>(e.count(b.queries, i));
  });
  ms = elapsed_ms(t0);
  return out;
}

}  // namespace

void write_csv_header(std::ostream& out) {
  out << "structure,phase,n,threads,wall_time_ms,throughput_per_s,peak_node_count,status,mismatches\n";
}

void write_csv(std::ostream& out, const record& r) {
  auto flags = out.flags();
  out << r.structure << ',' << r.phase << ',' << r.n << ',' << r.threads << ',' << std::fixed << std::setprecision(3)
      << r.wall_time_ms << ',' << std::setprecision(1) << r.throughput_per_s << ',' << r.peak_node_count << ','
      << r.status << ',' << r.mismatches << '\n';
  out.flags(flags);
}

std::vector<record> run_bench(const run_options& opt, const dataset& d, const query_set* queries) {
  const auto& s = checked_structure(opt, d, queries);
  const std::size_t n = d.size();
  std::vector<record> rows;

  std::unique_ptr<engine> e;
  std::vector<double> build_ms;
  for (int rep = 0; rep < 3; ++rep) {
    e.reset();
    thread_limit limit(opt.threads);
    auto t0 = clock_type::now();
    e = build_engine(s, d, opt.blocks);
    build_ms.push_back(elapsed_ms(t0));
  }
  std::sort(build_ms.begin(), build_ms.end());
  rows.push_back({std::string(s.name), "build", n, opt.threads, build_ms[1], per_second(n, build_ms[1]),
                  e->node_count(), "ok", 0});
  if (opt.corrupt) e = corrupt(std::move(e));

  std::vector<batch> batches;
  auto gen = [&](geo::gen::window_class w) {
    return generate_queries(s.query, opt.queries, w, n, opt.seed, opt.universe);
  };
  if (queries) {
    batches.push_back({"count-query", *queries, false});
    if (s.lists) {
      std::string cls = opt.window == geo::gen::window_class::small ? "list-small" : "list-large";
      batches.push_back({cls, *queries, true});
    }
  } else {
    batches.push_back({"count-query", gen(opt.window), false});
    if (s.lists) {
      batches.push_back({"list-small", gen(geo::gen::window_class::small), true});
      batches.push_back({"list-large", gen(geo::gen::window_class::large), true});
    }
  }

  for (const auto& b : batches) {
    double seq_ms = 0;
    auto want = run_batch(*e, b, 1, seq_ms);
    rows.push_back({std::string(s.name), b.phase, n, 1, seq_ms, per_second(want.size(), seq_ms), e->node_count(),
                    "ok", 0});
    if (opt.threads > 1) {
      double par_ms = 0;
      auto got = run_batch(*e, b, opt.threads, par_ms);
      std::size_t diff = 0;
      for (std::size_t i = 0; i < got.size(); ++i) diff += got[i] != want[i];
      rows.push_back({std::string(s.name), b.phase, n, opt.threads, par_ms, per_second(got.size(), par_ms),
                      e->node_count(), diff ? "mismatch" : "ok", diff});
    }
  }
  return rows;
}

verify_result run_verify(const run_options& opt, const dataset& d, const query_set* queries) {
  const auto& s = checked_structure(opt, d, queries);
  const std::size_t n = d.size();
  query_set generated;
  if (!queries) {
    generated = generate_queries(s.query, opt.queries, opt.window, n, opt.seed, opt.universe);
    queries = &generated;
  }
  const auto& q = *queries;
  if (static_cast<double>(n) * static_cast<double>(q.size()) > verify_touch_limit)
    throw argument_error("verify needs n * queries <= 1e9; got " + std::to_string(n) + " * " +
                         std::to_string(q.size()));

  verify_result res;
  res.row = {std::string(s.name), "verify", n, opt.threads, 0, 0, 0, "pass", 0};
  thread_limit limit(opt.threads);
  auto t0 = clock_type::now();
  auto e = build_engine(s, d, opt.blocks);
  res.row.peak_node_count = e->node_count();
  if (opt.corrupt) e = corrupt(std::move(e));

  // Sequential so the first divergence is the lowest index.
  for (std::size_t i = 0; i < q.size(); ++i) {
    std::string why;
    auto got = e->count(q, i);
    auto want = oracle_count(s, d, q, i);
    if (got != want) why = "count " + std::to_string(got) + ", oracle " + std::to_string(want);
    if (why.empty() && s.lists) {
      auto got_ids = e->list(q, i);
      auto want_ids = oracle_list(s, d, q, i);
      if (got_ids != want_ids) why = "ids " + show(got_ids) + ", oracle " + show(want_ids);
    }
    if (why.empty()) continue;
    if (res.row.mismatches++ == 0) res.first_divergence = describe(q, i) + ": " + why;
  }
  res.row.wall_time_ms = elapsed_ms(t0);
  res.row.throughput_per_s = per_second(q.size(), res.row.wall_time_ms);
  if (res.row.mismatches) res.row.status = "fail";
  return res;
}

}  // namespace augmap::bench
