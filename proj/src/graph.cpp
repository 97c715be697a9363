#include "perclab/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "perclab/errors.hpp"
#include "perclab/rng.hpp"

namespace perclab {

namespace {

bool lex_less(std::span<const double> a, std::span<const double> b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return false;
}

double pair_uniform(StreamPurpose purpose, std::uint64_t seed,
                    std::span<const double> x, std::span<const double> y) {
  // canonical identity: lexicographically smaller location first
  RngStream rng(seed, lex_less(x, y) ? stream_for_pair(purpose, x, y)
                                     : stream_for_pair(purpose, y, x));
  return rng.uniform();
}

void sort_edges(std::vector<GeoEdge>& edges) {
  std::sort(edges.begin(), edges.end(), [](const GeoEdge& l, const GeoEdge& r) {
    return l.a != r.a ? l.a < r.a : l.b < r.b;
  });
}

}  // namespace

GeoGraph GeoGraph::from_edges(
    MarkedCloud cloud, const std::vector<std::pair<std::uint32_t, std::uint32_t>>& pairs) {
  GeoGraph g;
  const auto n = cloud.size();
  for (auto [a, b] : pairs) {
    if (a == b) throw ParameterError("from_edges: self-loop");
    if (a >= n || b >= n) throw ParameterError("from_edges: vertex index out of range");
    GeoEdge e;
    e.a = std::min(a, b);
    e.b = std::max(a, b);
    e.length = domain_distance(cloud.base.domain, cloud.point(e.a), cloud.point(e.b));
    g.edges.push_back(e);
  }
  g.vertices = std::move(cloud);
  sort_edges(g.edges);
  for (std::size_t i = 1; i < g.edges.size(); ++i) {
    if (g.edges[i].a == g.edges[i - 1].a && g.edges[i].b == g.edges[i - 1].b)
      throw ParameterError("from_edges: duplicate edge");
  }
  return g;
}

GeoGraph build_graph_naive(const MarkedCloud& cloud, const KernelSpec& kernel,
                           std::uint64_t seed) {
  if (kernel.dim != cloud.dim())
    throw ParameterError("build_graph: kernel dimension does not match the cloud");
  GeoGraph g;
  g.build_seed = seed;
  const std::size_t n = cloud.size();
  const BoxDomain& dom = cloud.base.domain;
  for (std::size_t i = 0; i < n; ++i) {
    auto xi = cloud.point(i);
    for (std::size_t j = i + 1; j < n; ++j) {
      auto xj = cloud.point(j);
      double r = domain_distance(dom, xi, xj);
      double p = kernel.edge_prob(cloud.marks[i], cloud.marks[j], r);
      if (p <= 0.0) continue;
      if (p < 1.0 && pair_uniform(StreamPurpose::edge, seed, xi, xj) > p) continue;
      g.edges.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), r});
    }
  }
  g.vertices = cloud;
  sort_edges(g.edges);
  return g;
}

namespace {

struct CellGrid {
  int dim;
  std::vector<long> counts;   // cells per axis
  std::vector<double> width;  // cell width per axis
  std::vector<double> lo;
  std::vector<std::vector<std::uint32_t>> members;  // per linear cell
  std::vector<double> min_mark;                     // per linear cell

  long linear(const std::vector<long>& c) const {
    long idx = 0;
    for (int i = 0; i < dim; ++i) idx = idx * counts[i] + c[i];
    return idx;
  }
  std::vector<long> decode(long idx) const {
    std::vector<long> c(static_cast<size_t>(dim));
    for (int i = dim - 1; i >= 0; --i) {
      c[i] = idx % counts[i];
      idx /= counts[i];
    }
    return c;
  }
};

// Minimal distance between two grid cells (torus-aware per axis gaps).
double cell_min_distance(const CellGrid& grid, const BoxDomain& dom,
                         const std::vector<long>& a, const std::vector<long>& b) {
  double d2 = 0.0;
  for (int i = 0; i < grid.dim; ++i) {
    double gap = 0.0;
    long diff = std::labs(a[i] - b[i]);
    if (dom.torus) diff = std::min(diff, grid.counts[i] - diff);
    if (diff > 1) gap = static_cast<double>(diff - 1) * grid.width[i];
    d2 += gap * gap;
  }
  return std::sqrt(d2);
}

}  // namespace

GeoGraph build_graph_cells(const MarkedCloud& cloud, const KernelSpec& kernel,
                           double cell_side, std::uint64_t seed) {
  if (kernel.dim != cloud.dim())
    throw ParameterError("build_graph: kernel dimension does not match the cloud");
  if (std::isnan(cell_side))
    throw ParameterError("build_graph_cells: invalid cell_side");

  const std::size_t n = cloud.size();
  const BoxDomain& dom = cloud.base.domain;
  const int d = dom.dim;

  GeoGraph g;
  g.build_seed = seed;
  if (n == 0) {
    g.vertices = cloud;
    return g;
  }

  if (cell_side <= 0.0) {
    double vol = dom.volume();
    double spacing = vol > 0.0 ? std::pow(vol / static_cast<double>(n), 1.0 / d) : 1.0;
    cell_side = 4.0 * spacing;
  }

  CellGrid grid;
  grid.dim = d;
  grid.counts.resize(static_cast<size_t>(d));
  grid.width.resize(static_cast<size_t>(d));
  grid.lo.resize(static_cast<size_t>(d));
  long total_cells = 1;
  for (int i = 0; i < d; ++i) {
    grid.lo[i] = dom.lo(i);
    long c = std::max<long>(1, static_cast<long>(std::floor(dom.sides[i] / cell_side)));
    grid.counts[i] = c;
    grid.width[i] = dom.sides[i] > 0.0 ? dom.sides[i] / static_cast<double>(c) : 1.0;
    total_cells *= c;
  }
  grid.members.resize(static_cast<size_t>(total_cells));
  grid.min_mark.assign(static_cast<size_t>(total_cells), 1.0);

  std::vector<long> cidx(static_cast<size_t>(d));
  for (std::size_t v = 0; v < n; ++v) {
    auto pt = cloud.point(v);
    for (int i = 0; i < d; ++i) {
      long c = static_cast<long>(std::floor((pt[i] - grid.lo[i]) / grid.width[i]));
      cidx[i] = std::clamp<long>(c, 0, grid.counts[i] - 1);
    }
    long idx = grid.linear(cidx);
    grid.members[static_cast<size_t>(idx)].push_back(static_cast<std::uint32_t>(v));
    grid.min_mark[static_cast<size_t>(idx)] =
        std::min(grid.min_mark[static_cast<size_t>(idx)], cloud.marks[v]);
  }

  std::vector<long> occupied;
  for (long c = 0; c < total_cells; ++c)
    if (!grid.members[static_cast<size_t>(c)].empty()) occupied.push_back(c);

  auto test_pair = [&](std::uint32_t i, std::uint32_t j) {
    auto xi = cloud.point(i);
    auto xj = cloud.point(j);
    double r = domain_distance(dom, xi, xj);
    double p = kernel.edge_prob(cloud.marks[i], cloud.marks[j], r);
    if (p <= 0.0) return;
    if (p < 1.0 && pair_uniform(StreamPurpose::edge, seed, xi, xj) > p) return;
    g.edges.push_back({std::min(i, j), std::max(i, j), r});
  };

  for (std::size_t ai = 0; ai < occupied.size(); ++ai) {
    long ca = occupied[ai];
    const auto& mem_a = grid.members[static_cast<size_t>(ca)];
    auto dec_a = grid.decode(ca);
    // same-cell pairs: exhaustive
    for (std::size_t u = 0; u < mem_a.size(); ++u)
      for (std::size_t w = u + 1; w < mem_a.size(); ++w) test_pair(mem_a[u], mem_a[w]);

    for (std::size_t bi = ai + 1; bi < occupied.size(); ++bi) {
      long cb = occupied[bi];
      const auto& mem_b = grid.members[static_cast<size_t>(cb)];
      auto dec_b = grid.decode(cb);
      double d_min = cell_min_distance(grid, dom, dec_a, dec_b);
      double p_max =
          kernel.edge_prob(grid.min_mark[static_cast<size_t>(ca)],
                           grid.min_mark[static_cast<size_t>(cb)], d_min);
      if (p_max <= 0.0) continue;
      const std::uint64_t block_total =
          static_cast<std::uint64_t>(mem_a.size()) * mem_b.size();
      if (p_max > 0.25) {
        // rejection would degrade; test every pair with its keyed uniform
        for (std::uint32_t u : mem_a)
          for (std::uint32_t w : mem_b) test_pair(u, w);
        continue;
      }
      // geometric skipping through the implicit candidate list
      RngStream block_rng(seed, make_stream_id(StreamPurpose::cell_skip,
                                               static_cast<std::uint64_t>(ca),
                                               static_cast<std::uint64_t>(cb)));
      const double log_q = std::log1p(-p_max);
      std::uint64_t t = 0;
      for (;;) {
        double u = block_rng.uniform();
        double skip = std::floor(std::log(u) / log_q);
        if (skip >= static_cast<double>(block_total)) break;
        t += static_cast<std::uint64_t>(skip);
        if (t >= block_total) break;
        std::uint32_t i = mem_a[t / mem_b.size()];
        std::uint32_t j = mem_b[t % mem_b.size()];
        auto xi = cloud.point(i);
        auto xj = cloud.point(j);
        double r = domain_distance(dom, xi, xj);
        double p = kernel.edge_prob(cloud.marks[i], cloud.marks[j], r);
        if (block_rng.uniform() * p_max <= p)
          g.edges.push_back({std::min(i, j), std::max(i, j), r});
        ++t;
      }
    }
  }

  g.vertices = cloud;
  sort_edges(g.edges);
  return g;
}

GeoGraph bond_percolate(const GeoGraph& graph, double p, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0))
    throw ParameterError("bond_percolate: retention must be in [0,1]");
  GeoGraph g;
  g.vertices = graph.vertices;
  g.build_seed = graph.build_seed;
  if (p == 1.0) {
    g.edges = graph.edges;
    return g;
  }
  if (p == 0.0) return g;
  for (const GeoEdge& e : graph.edges) {
    double u = pair_uniform(StreamPurpose::bond, seed, graph.vertices.point(e.a),
                            graph.vertices.point(e.b));
    if (u <= p) g.edges.push_back(e);
  }
  return g;
}

GeoGraph truncate(const GeoGraph& graph, double ell) {
  if (!(ell > 0.0)) throw ParameterError("truncate: ell must be positive");
  GeoGraph g;
  g.vertices = graph.vertices;
  g.build_seed = graph.build_seed;
  for (const GeoEdge& e : graph.edges)
    if (e.length <= ell) g.edges.push_back(e);
  return g;
}

GeoGraph induced_subgraph(const GeoGraph& graph, const BoxDomain& box) {
  if (box.dim != graph.dim())
    throw ParameterError("induced_subgraph: box dimension mismatch");
  if (!box.inside(graph.vertices.base.domain))
    throw ParameterError("induced_subgraph: box not contained in the graph domain");

  const std::size_t n = graph.num_vertices();
  constexpr std::uint32_t kAbsent = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> remap(n, kAbsent);
  GeoGraph g;
  g.build_seed = graph.build_seed;
  MarkedCloud& mc = g.vertices;
  mc.base.domain = box;
  mc.base.source = graph.vertices.base.source;
  mc.base.source_param = graph.vertices.base.source_param;
  mc.base.seed = graph.vertices.base.seed;
  mc.mark_seed = graph.vertices.mark_seed;

  std::uint32_t next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    auto pt = graph.vertices.point(i);
    if (!box.contains(pt)) continue;
    remap[i] = next++;
    mc.base.coords.insert(mc.base.coords.end(), pt.begin(), pt.end());
    mc.marks.push_back(graph.vertices.marks[i]);
  }
  std::vector<double> origin(static_cast<size_t>(box.dim), 0.0);
  mc.palm = graph.vertices.palm && box.contains(origin);
  for (const GeoEdge& e : graph.edges) {
    if (remap[e.a] == kAbsent || remap[e.b] == kAbsent) continue;
    GeoEdge ne = e;
    ne.a = remap[e.a];
    ne.b = remap[e.b];
    if (ne.a > ne.b) std::swap(ne.a, ne.b);
    g.edges.push_back(ne);
  }
  sort_edges(g.edges);
  return g;
}

GeoGraph subgraph_by_vertices(const GeoGraph& graph,
                              const std::vector<std::uint32_t>& keep) {
  const std::size_t n = graph.num_vertices();
  constexpr std::uint32_t kAbsent = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> remap(n, kAbsent);
  GeoGraph g;
  g.build_seed = graph.build_seed;
  g.vertices.base.domain = graph.vertices.base.domain;
  g.vertices.base.source = graph.vertices.base.source;
  g.vertices.base.source_param = graph.vertices.base.source_param;
  g.vertices.base.seed = graph.vertices.base.seed;
  g.vertices.mark_seed = graph.vertices.mark_seed;
  for (std::size_t i = 0; i < keep.size(); ++i) {
    std::uint32_t v = keep[i];
    if (v >= n) throw ParameterError("subgraph_by_vertices: index out of range");
    if (remap[v] != kAbsent) throw ParameterError("subgraph_by_vertices: duplicate index");
    remap[v] = static_cast<std::uint32_t>(i);
    auto pt = graph.vertices.point(v);
    g.vertices.base.coords.insert(g.vertices.base.coords.end(), pt.begin(), pt.end());
    g.vertices.marks.push_back(graph.vertices.marks[v]);
  }
  for (const GeoEdge& e : graph.edges) {
    if (remap[e.a] == kAbsent || remap[e.b] == kAbsent) continue;
    GeoEdge ne = e;
    ne.a = remap[e.a];
    ne.b = remap[e.b];
    if (ne.a > ne.b) std::swap(ne.a, ne.b);
    g.edges.push_back(ne);
  }
  sort_edges(g.edges);
  return g;
}

}  // namespace perclab
