#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>

#include <augmap/bench/workload.hpp>
#include <augmap/errors.hpp>

using namespace augmap;
using namespace augmap::bench;

namespace {

struct workload_flags {
  std::size_t n = 10000;
  std::uint64_t seed = 1;
  geo::coord universe = geo::default_universe;
  std::string dataset;
  std::string query_file;
  std::string out;
  std::string window = "small";
  run_options run;
};

geo::gen::window_class parse_window(const std::string& s) {
  if (s == "small") return geo::gen::window_class::small;
  if (s == "large") return geo::gen::window_class::large;
  throw argument_error("window must be small or large, got '" + s + "'");
}

void add_workload(CLI::App& cmd, workload_flags& f) {
  cmd.add_option("--structure", f.run.structure, "Structure name")->required();
  cmd.add_option("--dataset", f.dataset, "Dataset file; generated from --n/--seed when absent");
  cmd.add_option("--query-file", f.query_file, "Query file; generated from --queries/--window when absent");
  cmd.add_option("--n", f.n, "Elements to generate");
  cmd.add_option("--seed", f.seed, "Generator seed");
  cmd.add_option("--universe", f.universe, "Coordinates lie in [0, universe]")->check(CLI::PositiveNumber);
  cmd.add_option("--threads", f.run.threads, "Worker threads")->check(CLI::PositiveNumber);
  cmd.add_option("--blocks", f.run.blocks, "Sweep blocks; 0 means one per worker");
  cmd.add_option("--window", f.window, "Query window class")->check(CLI::IsMember({"small", "large"}));
  cmd.add_option("--queries", f.run.queries, "Generated queries per batch");
  cmd.add_option("--out", f.out, "CSV destination; standard output when absent");
  cmd.add_flag("--corrupt", f.run.corrupt, "Perturb every answer")->group("");
}

struct loaded {
  dataset data;
  std::optional<query_set> queries;
};

loaded load(workload_flags& f) {
  const auto& s = find_structure(f.run.structure);
  f.run.seed = f.seed;
  f.run.universe = f.universe;
  f.run.window = parse_window(f.window);
  loaded l;
  l.data = f.dataset.empty() ? generate_dataset(s.data, f.n, f.seed, f.universe) : load_dataset(f.dataset);
  if (!f.query_file.empty()) l.queries = load_queries(f.query_file);
  return l;
}

template <class F>
void with_csv(const std::string& path, F&& write) {
  if (path.empty()) {
    write(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write(out);
  if (!out.flush()) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Augmented-map geometry structures: data generation, benchmarks and oracle checks"};
  app.require_subcommand(1);

  std::string gen_kind;
  std::size_t gen_n = 0;
  std::optional<std::size_t> gen_data_n;
  std::uint64_t gen_seed = 1;
  geo::coord gen_universe = geo::default_universe;
  std::string gen_window = "small";
  std::string gen_out;
  auto* gen = app.add_subcommand("gen", "Write a dataset or query file");
  gen->add_option("--kind", gen_kind, "points, segments, vsegments, rectangles, range, segment, hsegment or stab")
      ->required();
  gen->add_option("--n", gen_n, "Elements or queries to write")->required();
  gen->add_option("--data-n", gen_data_n, "Dataset size the query windows are scaled for (default --n)");
  gen->add_option("--seed", gen_seed, "Generator seed");
  gen->add_option("--universe", gen_universe, "Coordinates lie in [0, universe]")->check(CLI::PositiveNumber);
  gen->add_option("--window", gen_window, "Query window class")->check(CLI::IsMember({"small", "large"}));
  gen->add_option("--out", gen_out, "Destination file")->required();

  workload_flags bench_flags, verify_flags;
  auto* bench = app.add_subcommand("bench", "Time construction and query batches; emits CSV");
  add_workload(*bench, bench_flags);
  auto* verify = app.add_subcommand("verify", "Compare every answer with a linear scan; exit 1 on mismatch");
  add_workload(*verify, verify_flags);

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      if (auto k = parse_data_kind(gen_kind)) {
        save_dataset(gen_out, generate_dataset(*k, gen_n, gen_seed, gen_universe));
      } else if (auto qk = parse_query_kind(gen_kind)) {
        save_queries(gen_out, generate_queries(*qk, gen_n, parse_window(gen_window), gen_data_n.value_or(gen_n),
                                               gen_seed, gen_universe));
      } else {
        throw argument_error("unknown kind '" + gen_kind + "'");
      }
      return 0;
    }
    if (bench->parsed()) {
      auto l = load(bench_flags);
      auto rows = run_bench(bench_flags.run, l.data, l.queries ? &*l.queries : nullptr);
      with_csv(bench_flags.out, [&](std::ostream& out) {
        write_csv_header(out);
        for (const auto& r : rows) write_csv(out, r);
      });
      for (const auto& r : rows)
        if (r.status != "ok") return 1;
      return 0;
    }
    auto l = load(verify_flags);
    auto res = run_verify(verify_flags.run, l.data, l.queries ? &*l.queries : nullptr);
    with_csv(verify_flags.out, [&](std::ostream& out) {
      write_csv_header(out);
      write_csv(out, res.row);
    });
    if (res.row.mismatches) {
      std::cerr << "verify: " << res.row.mismatches << " mismatches; first at " << res.first_divergence << '\n';
      return 1;
    }
    return 0;
  } catch (const argument_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
