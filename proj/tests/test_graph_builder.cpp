#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "perclab/errors.hpp"
#include "perclab/graph.hpp"
#include "support/stats_oracle.hpp"

using namespace perclab;

namespace {

MarkedCloud poisson_cloud(int d, double side, double intensity, std::uint64_t seed) {
  return attach_marks(sample_poisson(BoxDomain::cube(d, side), intensity, seed), seed);
}

// marked cloud at explicit positions, marks fixed to 0.5 unless given
MarkedCloud hand_cloud(int d, std::vector<std::vector<double>> pts,
                       std::vector<double> marks = {}) {
  MarkedCloud mc;
  double extent = 1.0;
  for (const auto& p : pts)
    for (double x : p) extent = std::max(extent, std::fabs(x) * 2.0 + 1.0);
  mc.base.domain = BoxDomain::cube(d, extent);
  for (const auto& p : pts)
    mc.base.coords.insert(mc.base.coords.end(), p.begin(), p.end());
  mc.marks = marks.empty() ? std::vector<double>(pts.size(), 0.5) : marks;
  return mc;
}

}  // namespace

TEST_CASE("naive builder: degenerate kernels") {
  auto cloud = poisson_cloud(2, 10.0, 1.0, 3);
  // phi == 0 everywhere -> empty edge set
  auto none = build_graph_naive(cloud, KernelSpec::bernoulli_nn(2, 0.0), 5);
  CHECK(none.edges.empty());

  // edge probability 1 -> the single pair is connected
  auto two = hand_cloud(2, {{0.0, 0.0}, {1.0, 0.0}});
  auto sure = build_graph_naive(two, KernelSpec::long_range(2, 1e12, 1.0), 5);
  CHECK(sure.edges.size() == 1);
  CHECK(sure.edges[0].length == doctest::Approx(1.0));

  // dimension mismatch
  CHECK_THROWS_AS(build_graph_naive(cloud, KernelSpec::long_range(3, 1.0, 1.0), 5),
                  ParameterError);
}

TEST_CASE("naive builder: mean edge count matches the pair-probability sum") {
  auto cloud = poisson_cloud(2, 14.0, 1.0, 17);  // ~ 200 points
  auto kernel = KernelSpec::long_range(2, 1.0, 1.5);
  double expected = 0.0, variance = 0.0;
  for (std::size_t i = 0; i < cloud.size(); ++i)
    for (std::size_t j = i + 1; j < cloud.size(); ++j) {
      double r = domain_distance(cloud.base.domain, cloud.point(i), cloud.point(j));
      double p = kernel.edge_prob(cloud.marks[i], cloud.marks[j], r);
      expected += p;
      variance += p * (1.0 - p);
    }
  const int builds = 1000;
  double total = 0.0;
  for (int b = 0; b < builds; ++b)
    total += static_cast<double>(build_graph_naive(cloud, kernel, 1000 + b).edges.size());
  double mean = total / builds;
  double sigma = std::sqrt(variance / builds);
  CHECK(std::fabs(mean - expected) < 3.0 * sigma);
}

TEST_CASE("cells builder: single-cell grid reproduces the naive edge set exactly") {
  auto cloud = poisson_cloud(2, 12.0, 1.0, 29);
  auto kernel = KernelSpec::scale_free(2, 0.8, 0.5, 1.5);
  auto naive = build_graph_naive(cloud, kernel, 77);
  auto cells = build_graph_cells(cloud, kernel, 100.0, 77);  // one cell
  REQUIRE(naive.edges.size() == cells.edges.size());
  for (std::size_t i = 0; i < naive.edges.size(); ++i) {
    CHECK(naive.edges[i].a == cells.edges[i].a);
    CHECK(naive.edges[i].b == cells.edges[i].b);
  }
}

TEST_CASE("cells builder: empty cloud") {
  MarkedCloud empty;
  empty.base.domain = BoxDomain::cube(2, 5.0);
  auto g = build_graph_cells(empty, KernelSpec::long_range(2, 1.0, 1.5), 0.0, 1);
  CHECK(g.edges.empty());
  CHECK(g.num_vertices() == 0);
}

TEST_CASE("cells builder: per-annulus edge counts match naive distributionally") {
  auto cloud = poisson_cloud(2, 22.0, 1.0, 41);  // ~ 500 points
  auto kernel = KernelSpec::long_range(2, 1.0, 1.5);
  const int builds = 1000;
  const double diam = cloud.base.domain.diameter();
  const int annuli = 6;
  auto annulus_of = [&](double len) {
    int a = static_cast<int>(std::floor(len / diam * annuli));
    return std::min(a, annuli - 1);
  };
  // per annulus: histogram of per-build edge counts (count value -> builds)
  const int maxcount = 4000;
  std::vector<std::vector<std::uint64_t>> h_naive(annuli), h_cells(annuli);
  for (int a = 0; a < annuli; ++a) {
    h_naive[a].assign(maxcount, 0);
    h_cells[a].assign(maxcount, 0);
  }
  for (int b = 0; b < builds; ++b) {
    auto gn = build_graph_naive(cloud, kernel, 5000 + b);
    auto gc = build_graph_cells(cloud, kernel, 3.0, 90000 + b);
    std::vector<int> cn(annuli, 0), cc(annuli, 0);
    for (const auto& e : gn.edges) ++cn[annulus_of(e.length)];
    for (const auto& e : gc.edges) ++cc[annulus_of(e.length)];
    for (int a = 0; a < annuli; ++a) {
      ++h_naive[a][std::min(cn[a], maxcount - 1)];
      ++h_cells[a][std::min(cc[a], maxcount - 1)];
    }
  }
  for (int a = 0; a < annuli; ++a) {
    double p = testsupport::chi2_two_sample_pvalue(h_naive[a], h_cells[a]);
    CHECK(p > 0.01 / annuli);
  }
}

TEST_CASE("bond percolation: identity, empty, binomial count") {
  auto cloud = poisson_cloud(2, 25.0, 1.0, 51);
  auto g = build_graph_naive(cloud, KernelSpec::long_range(2, 4.0, 1.5), 7);
  REQUIRE(g.edges.size() > 500);

  auto full = bond_percolate(g, 1.0, 9);
  CHECK(full.edges.size() == g.edges.size());
  auto nothing = bond_percolate(g, 0.0, 9);
  CHECK(nothing.edges.empty());
  CHECK_THROWS_AS(bond_percolate(g, 1.5, 9), ParameterError);

  const int reps = 400;
  const double m = static_cast<double>(g.edges.size());
  double total = 0;
  for (int r = 0; r < reps; ++r)
    total += static_cast<double>(bond_percolate(g, 0.5, 100 + r).edges.size());
  double mean = total / reps;
  double sigma = std::sqrt(m * 0.25 / reps);
  CHECK(std::fabs(mean - 0.5 * m) < 3.5 * sigma);
}

TEST_CASE("bond percolation: retained sets are nested across p (shared seed)") {
  auto cloud = poisson_cloud(2, 18.0, 1.0, 61);
  auto g = build_graph_naive(cloud, KernelSpec::long_range(2, 2.0, 1.5), 3);
  auto count_common = [](const GeoGraph& small, const GeoGraph& big) {
    std::size_t found = 0;
    for (const auto& e : small.edges)
      for (const auto& f : big.edges)
        if (e.a == f.a && e.b == f.b) {
          ++found;
          break;
        }
    return found;
  };
  auto g3 = bond_percolate(g, 0.3, 42);
  auto g7 = bond_percolate(g, 0.7, 42);
  CHECK(count_common(g3, g7) == g3.edges.size());
}

TEST_CASE("truncate: filters by cached length") {
  auto pts = hand_cloud(1, {{0.0}, {0.5}, {2.0}, {4.5}});
  auto g = GeoGraph::from_edges(pts, {{0, 1}, {1, 2}, {2, 3}});
  // lengths: 0.5, 1.5, 2.5
  CHECK(truncate(g, 10.0).edges.size() == 3);
  CHECK(truncate(g, 0.4).edges.size() == 0);
  CHECK(truncate(g, 2.0).edges.size() == 2);
  CHECK_THROWS_AS(truncate(g, 0.0), ParameterError);
  // nesting
  for (double l1 : {0.4, 1.0, 2.0}) {
    CHECK(truncate(g, l1).edges.size() <= truncate(g, l1 + 1.0).edges.size());
  }
}

TEST_CASE("induced subgraph: identity, empty, manual enumeration") {
  auto cloud = poisson_cloud(2, 10.0, 1.0, 71);
  auto g = build_graph_naive(cloud, KernelSpec::long_range(2, 2.0, 1.5), 5);
  auto same = induced_subgraph(g, g.vertices.base.domain);
  CHECK(same.num_vertices() == g.num_vertices());
  CHECK(same.edges.size() == g.edges.size());

  BoxDomain tiny = BoxDomain::cube(2, 1e-9);
  CHECK(induced_subgraph(g, tiny).num_vertices() == 0);

  BoxDomain outside = BoxDomain::cube(2, 20.0);
  CHECK_THROWS_AS(induced_subgraph(g, outside), ParameterError);

  // 10-vertex hand-built instance vs manual enumeration
  auto hand = hand_cloud(1, {{-4.0}, {-3.0}, {-2.0}, {-1.0}, {-0.4}, {0.4},
                             {1.0}, {2.0}, {3.0}, {4.0}});
  auto hg = GeoGraph::from_edges(
      hand, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 7}, {7, 8}, {8, 9}});
  BoxDomain half = BoxDomain::cube(1, 1.0);  // [-0.5, 0.5): holds -0.4, 0.4
  auto sub = induced_subgraph(hg, half);
  CHECK(sub.num_vertices() == 2);
  REQUIRE(sub.edges.size() == 1);
  CHECK(sub.edges[0].length == doctest::Approx(0.8));
}

TEST_CASE("degree is monotone under raising a mark (shared randomness)") {
  auto cloud = poisson_cloud(2, 12.0, 1.0, 81);
  REQUIRE(cloud.size() > 50);
  auto kernel = KernelSpec::scale_free(2, 1.0, 0.6, 1.5);
  auto g1 = build_graph_naive(cloud, kernel, 13);
  auto degree = [](const GeoGraph& g, std::uint32_t v) {
    std::size_t d = 0;
    for (const auto& e : g.edges) d += (e.a == v || e.b == v);
    return d;
  };
  MarkedCloud raised = cloud;
  const std::uint32_t target = 7;
  raised.marks[target] = 0.5 + 0.5 * raised.marks[target];  // strictly larger
  auto g2 = build_graph_naive(raised, kernel, 13);
  CHECK(degree(g2, target) <= degree(g1, target));
}

TEST_CASE("torus distances wrap in the builder") {
  MarkedCloud mc;
  mc.base.domain = BoxDomain::cube(1, 10.0, /*torus=*/true);
  mc.base.coords = {-4.9, 4.9};  // wrapped distance 0.2
  mc.marks = {0.5, 0.5};
  auto g = build_graph_naive(mc, KernelSpec::long_range(1, 1e9, 1.0), 3);
  REQUIRE(g.edges.size() == 1);
  CHECK(g.edges[0].length == doctest::Approx(0.2).epsilon(1e-9));
}
