#include <array>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include <augmap/bench/workload.hpp>
#include <augmap/errors.hpp>

namespace augmap::bench {

namespace {

constexpr std::array<std::string_view, 4> data_names{"points", "segments", "vsegments", "rectangles"};
constexpr std::array<std::string_view, 4> query_names{"range", "segment", "hsegment", "stab"};

// Parses exactly count space-separated integers.
template <std::size_t N>
std::array<std::int64_t, N> parse_fields(const std::string& line, std::size_t lineno) {
  std::array<std::int64_t, N> out{};
  const char* p = line.data();
  const char* end = p + line.size();
  for (std::size_t i = 0; i < N; ++i) {
    while (p < end && *p == ' ') ++p;
    auto [next, ec] = std::from_chars(p, end, out[i]);
    if (ec != std::errc{}) throw parse_error("expected " + std::to_string(N) + " integers", lineno);
    p = next;
  }
  while (p < end && (*p == ' ' || *p == '\r')) ++p;
  if (p != end) throw parse_error("trailing characters", lineno);
  return out;
}

struct header {
  std::string kind;
  std::size_t count;
  std::uint64_t seed;
};

header read_header(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.empty() || line[0] != '#') throw parse_error("missing '#kind n seed' header", 1);
  auto sp1 = line.find(' ');
  if (sp1 == std::string::npos) throw parse_error("malformed header", 1);
  header h;
  h.kind = line.substr(1, sp1 - 1);
  auto rest = line.substr(sp1 + 1);
  std::uint64_t count = 0, seed = 0;
  const char* p = rest.data();
  const char* end = p + rest.size();
  auto r1 = std::from_chars(p, end, count);
  if (r1.ec != std::errc{} || r1.ptr == end || *r1.ptr != ' ') throw parse_error("malformed header", 1);
  auto r2 = std::from_chars(r1.ptr + 1, end, seed);
  if (r2.ec != std::errc{}) throw parse_error("malformed header", 1);
  h.count = count;
  h.seed = seed;
  return h;
}

template <std::size_t N, class F>
void read_body(std::istream& in, std::size_t count, F&& emit) {
  std::string line;
  for (std::size_t i = 0; i < count; ++i) {
    if (!std::getline(in, line)) throw parse_error("file ends before the declared count", i + 2);
    emit(parse_fields<N>(line, i + 2), i);
  }
  while (std::getline(in, line))
    if (!line.empty() && line != "\r") throw parse_error("more lines than the declared count", count + 2);
}

}  // namespace

std::string_view name_of(data_kind k) { return data_names[static_cast<std::size_t>(k)]; }
std::string_view name_of(query_kind k) { return query_names[static_cast<std::size_t>(k)]; }

std::optional<data_kind> parse_data_kind(std::string_view s) {
  for (std::size_t i = 0; i < data_names.size(); ++i)
    if (data_names[i] == s) return static_cast<data_kind>(i);
  return std::nullopt;
}
std::optional<query_kind> parse_query_kind(std::string_view s) {
  for (std::size_t i = 0; i < query_names.size(); ++i)
    if (query_names[i] == s) return static_cast<query_kind>(i);
  return std::nullopt;
}

std::size_t dataset::size() const {
  switch (kind) {
    case data_kind::points: return points.size();
    case data_kind::segments:
    case data_kind::vsegments: return segments.size();
    case data_kind::rectangles: return rectangles.size();
  }
  return 0;
}

std::size_t query_set::size() const {
  switch (kind) {
    case query_kind::range: return windows.size();
    case query_kind::segment: return vertical.size();
    case query_kind::hsegment: return horizontal.size();
    case query_kind::stab: return stabs.size();
  }
  return 0;
}

dataset generate_dataset(data_kind kind, std::size_t n, std::uint64_t seed, coord universe) {
  if (universe < 1) throw argument_error("universe must be positive");
  dataset d;
  d.kind = kind;
  d.seed = seed;
  switch (kind) {
    case data_kind::points: d.points = geo::gen::points(n, seed, universe); break;
    case data_kind::segments:
      d.segments = geo::gen::segments(n, seed, universe);
      if (!geo::pairwise_disjoint(d.segments)) throw invariant_violation("generated segments intersect");
      break;
    case data_kind::vsegments: d.segments = geo::gen::vertical_segments(n, seed, universe); break;
    case data_kind::rectangles: d.rectangles = geo::gen::rectangles(n, seed, universe); break;
  }
  return d;
}

query_set generate_queries(query_kind kind, std::size_t count, geo::gen::window_class window, std::size_t n,
                           std::uint64_t seed, coord universe) {
  query_set q;
  q.kind = kind;
  q.seed = seed;
  switch (kind) {
    case query_kind::range: q.windows = geo::gen::range_windows(count, window, n, seed, universe); break;
    case query_kind::segment: q.vertical = geo::gen::vertical_probes(count, window, n, seed, universe); break;
    case query_kind::hsegment: q.horizontal = geo::gen::horizontal_probes(count, window, n, seed, universe); break;
    case query_kind::stab: q.stabs = geo::gen::stab_points(count, seed, universe); break;
  }
  return q;
}

void write_dataset(std::ostream& out, const dataset& d) {
  out << '#' << name_of(d.kind) << ' ' << d.size() << ' ' << d.seed << '\n';
  for (const auto& p : d.points) out << p.x << ' ' << p.y << ' ' << p.w << '\n';
  for (const auto& s : d.segments) out << s.x1 << ' ' << s.y1 << ' ' << s.x2 << ' ' << s.y2 << '\n';
  for (const auto& r : d.rectangles) out << r.x1 << ' ' << r.y1 << ' ' << r.x2 << ' ' << r.y2 << '\n';
}

void write_queries(std::ostream& out, const query_set& q) {
  out << '#' << name_of(q.kind) << ' ' << q.size() << ' ' << q.seed << '\n';
  for (const auto& w : q.windows) out << w.x_lo << ' ' << w.y_lo << ' ' << w.x_hi << ' ' << w.y_hi << '\n';
  for (const auto& p : q.vertical) out << p.at << ' ' << p.y_lo << ' ' << p.y_hi << '\n';
  for (const auto& p : q.horizontal) out << p.at << ' ' << p.x_lo << ' ' << p.x_hi << '\n';
  for (const auto& s : q.stabs) out << s.x << ' ' << s.y << '\n';
}

dataset read_dataset(std::istream& in) {
  auto h = read_header(in);
  auto kind = parse_data_kind(h.kind);
  if (!kind) throw parse_error("unknown dataset kind '" + h.kind + "'", 1);
  dataset d;
  d.kind = *kind;
  d.seed = h.seed;
  auto id = [](std::size_t i) { return static_cast<std::uint32_t>(i); };
  switch (*kind) {
    case data_kind::points:
      d.points.resize(h.count);
      read_body<3>(in, h.count, [&](auto f, std::size_t i) { d.points[i] = {f[0], f[1], f[2]}; });
      break;
    case data_kind::segments:
    case data_kind::vsegments:
      d.segments.resize(h.count);
      read_body<4>(in, h.count, [&](auto f, std::size_t i) {
        try {
          d.segments[i] = geo::make_segment(f[0], f[1], f[2], f[3], id(i));
        } catch (const argument_error& e) {
          throw parse_error(e.what(), i + 2);
        }
      });
      break;
    case data_kind::rectangles:
      d.rectangles.resize(h.count);
      read_body<4>(in, h.count,
                   [&](auto f, std::size_t i) { d.rectangles[i] = geo::make_rectangle(f[0], f[1], f[2], f[3], id(i)); });
      break;
  }
  return d;
}

query_set read_queries(std::istream& in) {
  auto h = read_header(in);
  auto kind = parse_query_kind(h.kind);
  if (!kind) throw parse_error("unknown query kind '" + h.kind + "'", 1);
  query_set q;
  q.kind = *kind;
  q.seed = h.seed;
  auto check = [](bool ok, std::size_t i) {
    if (!ok) throw parse_error("query has inverted bounds", i + 2);
  };
  switch (*kind) {
    case query_kind::range:
      q.windows.resize(h.count);
      read_body<4>(in, h.count, [&](auto f, std::size_t i) {
        q.windows[i] = {f[0], f[1], f[2], f[3]};
        check(f[0] <= f[2] && f[1] <= f[3], i);
      });
      break;
    case query_kind::segment:
      q.vertical.resize(h.count);
      read_body<3>(in, h.count, [&](auto f, std::size_t i) {
        q.vertical[i] = {f[0], f[1], f[2]};
        check(f[1] <= f[2], i);
      });
      break;
    case query_kind::hsegment:
      q.horizontal.resize(h.count);
      read_body<3>(in, h.count, [&](auto f, std::size_t i) {
        q.horizontal[i] = {f[0], f[1], f[2]};
        check(f[1] <= f[2], i);
      });
      break;
    case query_kind::stab:
      q.stabs.resize(h.count);
      read_body<2>(in, h.count, [&](auto f, std::size_t i) { q.stabs[i] = {f[0], f[1]}; });
      break;
  }
  return q;
}

namespace {
template <class T, class F>
T with_input(const std::string& path, F&& read) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
  try {
    return read(in);
  } catch (const parse_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}
template <class F>
void with_output(const std::string& path, F&& write) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write(out);
  out.flush();
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}
}  // namespace

dataset load_dataset(const std::string& path) {
  return with_input<dataset>(path, [](std::istream& in) { return read_dataset(in); });
}
query_set load_queries(const std::string& path) {
  return with_input<query_set>(path, [](std::istream& in) { return read_queries(in); });
}
void save_dataset(const std::string& path, const dataset& d) {
  with_output(path, [&](std::ostream& out) { write_dataset(out, d); });
}
void save_queries(const std::string& path, const query_set& q) {
  with_output(path, [&](std::ostream& out) { write_queries(out, q); });
}

}  // namespace augmap::bench
