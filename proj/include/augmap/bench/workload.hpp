#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "../geo/generate.hpp"
#include "../geo/segment.hpp"
#include "../geo/types.hpp"

namespace augmap::bench {

using geo::coord;

enum class data_kind { points, segments, vsegments, rectangles };
enum class query_kind { range, segment, hsegment, stab };

std::string_view name_of(data_kind k);
std::string_view name_of(query_kind k);
std::optional<data_kind> parse_data_kind(std::string_view s);
std::optional<query_kind> parse_query_kind(std::string_view s);

// Only the vector matching kind is populated. Element ids equal their positions.
struct dataset {
  data_kind kind = data_kind::points;
  std::uint64_t seed = 0;
  std::vector<geo::point> points;
  std::vector<geo::segment> segments;
  std::vector<geo::rectangle> rectangles;
  std::size_t size() const;
};

struct query_set {
  query_kind kind = query_kind::range;
  std::uint64_t seed = 0;
  std::vector<geo::range_window> windows;
  std::vector<geo::vertical_probe> vertical;
  std::vector<geo::horizontal_probe> horizontal;
  std::vector<geo::stab_point> stabs;
  std::size_t size() const;
};

dataset generate_dataset(data_kind kind, std::size_t n, std::uint64_t seed, coord universe);
// n sizes the windows.
query_set generate_queries(query_kind kind, std::size_t count, geo::gen::window_class window, std::size_t n,
                           std::uint64_t seed, coord universe);

// Text formats: first line "#<kind> <count> <seed>", then one element per line.
void write_dataset(std::ostream& out, const dataset& d);
void write_queries(std::ostream& out, const query_set& q);
dataset read_dataset(std::istream& in);
query_set read_queries(std::istream& in);
dataset load_dataset(const std::string& path);
query_set load_queries(const std::string& path);
void save_dataset(const std::string& path, const dataset& d);
void save_queries(const std::string& path, const query_set& q);

struct structure_info {
  std::string_view name;
  data_kind data;
  query_kind query;
  bool lists;   // reports element ids
  bool counts;  // answers counts natively
};

std::span<const structure_info> structures();
const structure_info& find_structure(std::string_view name);

// A built query structure. Ids are ascending.
class engine {
 public:
  virtual ~engine() = default;
  virtual std::int64_t count(const query_set& q, std::size_t i) const = 0;
  virtual std::vector<std::uint32_t> list(const query_set& q, std::size_t i) const = 0;
  // Tree nodes owned by the structure.
  std::size_t node_count() const { return nodes_; }
  void set_node_count(std::size_t n) { nodes_ = n; }

 private:
  std::size_t nodes_ = 0;
};

// blocks = 0 uses one block per worker.
std::unique_ptr<engine> build_engine(const structure_info& s, const dataset& d, std::size_t blocks);

// Deliberately wrong answers; negative control for verify.
std::unique_ptr<engine> corrupt(std::unique_ptr<engine> e);

// Linear-scan answers to the question the structure answers.
std::int64_t oracle_count(const structure_info& s, const dataset& d, const query_set& q, std::size_t i);
std::vector<std::uint32_t> oracle_list(const structure_info& s, const dataset& d, const query_set& q, std::size_t i);

struct record {
  std::string structure;
  std::string phase;  // build, count-query, list-small, list-large, verify
  std::size_t n = 0;
  std::size_t threads = 1;
  double wall_time_ms = 0;
  double throughput_per_s = 0;
  std::size_t peak_node_count = 0;
  std::string status = "ok";
  std::size_t mismatches = 0;
};

void write_csv_header(std::ostream& out);
void write_csv(std::ostream& out, const record& r);

struct run_options {
  std::string structure;
  std::size_t threads = 1;
  std::size_t blocks = 0;
  geo::gen::window_class window = geo::gen::window_class::small;
  std::size_t queries = 1000;
  std::uint64_t seed = 1;
  coord universe = geo::default_universe;
  bool corrupt = false;
};

// Build and query timing rows. When queries is given it replaces the generated batches.
std::vector<record> run_bench(const run_options& opt, const dataset& d, const query_set* queries);

struct verify_result {
  record row;
  std::string first_divergence;  // empty when everything matched
};

// Every query through the structure and the linear oracle. Throws when n * queries exceeds
// 10^9 element touches.
verify_result run_verify(const run_options& opt, const dataset& d, const query_set* queries);

inline constexpr double verify_touch_limit = 1e9;

}  // namespace augmap::bench
