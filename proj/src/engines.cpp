#include <algorithm>
#include <array>
#include <limits>

#include <augmap/bench/workload.hpp>
#include <augmap/geo/brute.hpp>
#include <augmap/geo/range_query.hpp>
#include <augmap/geo/rect_query.hpp>
#include <augmap/geo/seg_query.hpp>

namespace augmap::bench {

namespace {

constexpr std::array<structure_info, 11> registry{{
    {"range-tree", data_kind::points, query_kind::range, true, true},
    {"range-swp", data_kind::points, query_kind::range, true, true},
    {"seg-tree", data_kind::segments, query_kind::segment, true, true},
    {"seg-swp", data_kind::segments, query_kind::segment, true, true},
    {"seg-cnt-tree", data_kind::vsegments, query_kind::hsegment, false, true},
    {"seg-cnt-swp", data_kind::vsegments, query_kind::hsegment, false, true},
    {"rec-tree", data_kind::rectangles, query_kind::stab, true, false},
    {"rec-swp", data_kind::rectangles, query_kind::stab, true, false},
    {"rec-cnt-tree", data_kind::rectangles, query_kind::stab, false, true},
    {"rec-cnt-swp", data_kind::rectangles, query_kind::stab, false, true},
    {"interval-tree", data_kind::rectangles, query_kind::stab, true, true},
}};

std::vector<std::uint32_t> ids_of(const std::vector<geo::point_key>& keys) {
  std::vector<std::uint32_t> out;
  out.reserve(keys.size());
  for (const auto& k : keys) out.push_back(k.id);
  std::sort(out.begin(), out.end());
  return out;
}

// The interval-tree workload stabs the rectangles' x-extents.
std::vector<geo::interval> x_extents(const std::vector<geo::rectangle>& rects) {
  std::vector<geo::interval> out;
  out.reserve(rects.size());
  for (const auto& r : rects) out.push_back({r.x1, r.x2, r.id});
  return out;
}

[[noreturn]] void unsupported(std::string_view what) {
  throw argument_error(std::string(what) + " is not supported by this structure");
}

template <class Impl, class Count, class List>
class simple_engine final : public engine {
 public:
  simple_engine(Impl impl, Count count, List list)
      : impl_(std::move(impl)), count_(std::move(count)), list_(std::move(list)) {}
  std::int64_t count(const query_set& q, std::size_t i) const override { return count_(impl_, q, i); }
  std::vector<std::uint32_t> list(const query_set& q, std::size_t i) const override { return list_(impl_, q, i); }

 private:
  Impl impl_;
  Count count_;
  List list_;
};

template <class Impl, class Count, class List>
std::unique_ptr<engine> make(Impl impl, Count count, List list) {
  return std::make_unique<simple_engine<Impl, Count, List>>(std::move(impl), std::move(count), std::move(list));
}

auto no_list = [](const auto&, const query_set&, std::size_t) -> std::vector<std::uint32_t> { unsupported("listing"); };

std::unique_ptr<engine> build_impl(std::string_view name, const dataset& d, std::size_t blocks) {
  using namespace geo;
  if (name == "range-tree")
    return make(
        range_tree<>::build(d.points), [](const auto& t, const query_set& q, std::size_t i) { return t.count(q.windows[i]); },
        [](const auto& t, const query_set& q, std::size_t i) { return ids_of(t.list(q.windows[i])); });
  if (name == "range-swp") {
    auto rs = range_sweep<>::build(d.points, blocks);
    std::size_t counting_nodes = rs.node_count_of(sweep_variant::counting);
    auto e = make(
        std::move(rs), [](const auto& t, const query_set& q, std::size_t i) { return t.count(q.windows[i]); },
        [](const auto& t, const query_set& q, std::size_t i) { return ids_of(t.list(q.windows[i])); });
    // The space figure covers the counting prefixes; the report-all copy is an add-on.
    e->set_node_count(counting_nodes);
    return e;
  }
  if (name == "seg-tree")
    return make(
        seg_tree<>::build(d.segments), [](const auto& t, const query_set& q, std::size_t i) { return t.count(q.vertical[i]); },
        [](const auto& t, const query_set& q, std::size_t i) { return t.list(q.vertical[i]); });
  if (name == "seg-swp")
    return make(
        seg_sweep<>::build(d.segments, blocks),
        [](const auto& t, const query_set& q, std::size_t i) { return t.count(q.vertical[i]); },
        [](const auto& t, const query_set& q, std::size_t i) { return t.list(q.vertical[i]); });
  if (name == "seg-cnt-tree")
    return make(
        seg_count_tree<>::build(d.segments),
        [](const auto& t, const query_set& q, std::size_t i) { return t.count(q.horizontal[i]); }, no_list);
  if (name == "seg-cnt-swp")
    return make(
        seg_count_sweep<>::build(d.segments, blocks),
        [](const auto& t, const query_set& q, std::size_t i) { return t.count(q.horizontal[i]); }, no_list);
  if (name == "rec-tree")
    return make(
        rect_tree<>::build(d.rectangles),
        [](const auto& t, const query_set& q, std::size_t i) { return std::ssize(t.list(q.stabs[i])); },
        [](const auto& t, const query_set& q, std::size_t i) { return t.list(q.stabs[i]); });
  if (name == "rec-swp")
    return make(
        rect_sweep<>::build(d.rectangles, blocks),
        [](const auto& t, const query_set& q, std::size_t i) { return std::ssize(t.list(q.stabs[i])); },
        [](const auto& t, const query_set& q, std::size_t i) { return t.list(q.stabs[i]); });
  if (name == "rec-cnt-tree")
    return make(
        rect_count_tree<>::build(d.rectangles),
        [](const auto& t, const query_set& q, std::size_t i) { return t.count(q.stabs[i]); }, no_list);
  if (name == "rec-cnt-swp")
    return make(
        rect_count_sweep<>::build(d.rectangles, blocks),
        [](const auto& t, const query_set& q, std::size_t i) { return t.count(q.stabs[i]); }, no_list);
  if (name == "interval-tree")
    return make(
        interval_tree<>::build(x_extents(d.rectangles)),
        [](const auto& t, const query_set& q, std::size_t i) { return t.count(q.stabs[i].x); },
        [](const auto& t, const query_set& q, std::size_t i) {
          std::vector<std::uint32_t> out;
          for (const auto& iv : t.stab(q.stabs[i].x)) out.push_back(iv.id);
          std::sort(out.begin(), out.end());
          return out;
        });
  throw argument_error("unknown structure '" + std::string(name) + "'");
}

class corrupted_engine final : public engine {
 public:
  explicit corrupted_engine(std::unique_ptr<engine> inner) : inner_(std::move(inner)) {
    set_node_count(inner_->node_count());
  }
  std::int64_t count(const query_set& q, std::size_t i) const override { return inner_->count(q, i) + 1; }
  std::vector<std::uint32_t> list(const query_set& q, std::size_t i) const override {
    auto out = inner_->list(q, i);
    out.push_back(std::numeric_limits<std::uint32_t>::max());
    return out;
  }

 private:
  std::unique_ptr<engine> inner_;
};

}  // namespace

std::span<const structure_info> structures() { return registry; }

const structure_info& find_structure(std::string_view name) {
  for (const auto& s : registry)
    if (s.name == name) return s;
  throw argument_error("unknown structure '" + std::string(name) + "'");
}

std::unique_ptr<engine> build_engine(const structure_info& s, const dataset& d, std::size_t blocks) {
  if (d.kind != s.data)
    throw argument_error(std::string(s.name) + " needs a " + std::string(name_of(s.data)) + " dataset, got " +
                         std::string(name_of(d.kind)));
  if (blocks == 0) blocks = worker_count();
  auto live0 = all_node_stats::live();
  auto e = build_impl(s.name, d, blocks);
  if (e->node_count() == 0) e->set_node_count(static_cast<std::size_t>(all_node_stats::live() - live0));
  return e;
}

std::unique_ptr<engine> corrupt(std::unique_ptr<engine> e) { return std::make_unique<corrupted_engine>(std::move(e)); }

std::vector<std::uint32_t> oracle_list(const structure_info& s, const dataset& d, const query_set& q, std::size_t i) {
  if (s.name == "interval-tree") {
    std::vector<std::uint32_t> out;
    for (const auto& iv : geo::brute::stab(x_extents(d.rectangles), q.stabs[i].x)) out.push_back(iv.id);
    std::sort(out.begin(), out.end());
    return out;
  }
  switch (q.kind) {
    case query_kind::range: return ids_of(geo::brute::range_list(d.points, q.windows[i]));
    case query_kind::segment: return geo::brute::seg_list(d.segments, q.vertical[i]);
    case query_kind::hsegment: break;
    case query_kind::stab: return geo::brute::rect_list(d.rectangles, q.stabs[i]);
  }
  unsupported("listing");
}

std::int64_t oracle_count(const structure_info& s, const dataset& d, const query_set& q, std::size_t i) {
  if (s.name == "interval-tree") return std::ssize(geo::brute::stab(x_extents(d.rectangles), q.stabs[i].x));
  switch (q.kind) {
    case query_kind::range: return geo::brute::range_count(d.points, q.windows[i]);
    case query_kind::segment: return geo::brute::seg_count(d.segments, q.vertical[i]);
    case query_kind::hsegment: return geo::brute::vseg_count(d.segments, q.horizontal[i]);
    case query_kind::stab: return geo::brute::rect_count(d.rectangles, q.stabs[i]);
  }
  return 0;
}

}  // namespace augmap::bench
