#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "perclab/clusters.hpp"
#include "perclab/errors.hpp"
#include "support/graph_oracle.hpp"

using namespace perclab;

namespace {

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

TEST_CASE("components: edgeless, triangle") {
  auto lonely = hand_cloud(1, {{0.0}, {1.0}, {2.0}, {3.0}});
  auto g0 = GeoGraph::from_edges(lonely, {});
  auto p0 = components(g0);
  CHECK(p0.num_components() == 4);
  CHECK(p0.largest_size() == 1);

  auto tri = GeoGraph::from_edges(hand_cloud(1, {{0.0}, {1.0}, {2.0}}),
                                  {{0, 1}, {1, 2}, {0, 2}});
  auto pt = components(tri);
  CHECK(pt.num_components() == 1);
  CHECK(pt.component_size(0) == 3);
}

TEST_CASE("components: union-find agrees with BFS on random graphs") {
  std::mt19937 gen(9);
  for (int it = 0; it < 60; ++it) {
    int n = 30 + static_cast<int>(gen() % 40);
    std::vector<std::vector<double>> pts;
    for (int i = 0; i < n; ++i)
      pts.push_back({static_cast<double>(i % 10), static_cast<double>(i / 10)});
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
    std::uniform_real_distribution<double> unif(0, 1);
    for (std::uint32_t a = 0; a < static_cast<std::uint32_t>(n); ++a)
      for (std::uint32_t b = a + 1; b < static_cast<std::uint32_t>(n); ++b)
        if (unif(gen) < 0.04) pairs.push_back({a, b});
    auto g = GeoGraph::from_edges(hand_cloud(2, pts), pairs);
    auto part = components(g);
    auto oracle = testsupport::bfs_components(g);
    // same partition: equal component ids iff equal roots
    for (std::uint32_t a = 0; a < static_cast<std::uint32_t>(n); ++a)
      for (std::uint32_t b = a + 1; b < static_cast<std::uint32_t>(n); ++b)
        CHECK((part.find(a) == part.find(b)) == (oracle[a] == oracle[b]));
    CHECK(part.largest_size() == testsupport::bfs_largest_component(g));
  }
}

TEST_CASE("largest_component_size over boxes") {
  // two components: path of 4 on the left, clique of 7 on the right
  std::vector<std::vector<double>> pts;
  for (int i = 0; i < 4; ++i) pts.push_back({-8.0 + i, 0.0});
  for (int i = 0; i < 7; ++i) pts.push_back({5.0 + 0.1 * i, 0.0});
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
  for (std::uint32_t i = 0; i + 1 < 4; ++i) pairs.push_back({i, i + 1});
  for (std::uint32_t i = 4; i < 11; ++i)
    for (std::uint32_t j = i + 1; j < 11; ++j) pairs.push_back({i, j});
  auto g = GeoGraph::from_edges(hand_cloud(2, pts), pairs);

  CHECK(largest_component_size(g, g.vertices.base.domain) == 7);
  BoxDomain empty_box = BoxDomain::cube(2, 0.5);
  empty_box.center = {0.0, 5.0};
  CHECK(largest_component_size(g, empty_box) == 0);
  BoxDomain left = BoxDomain::cube_at(std::vector<double>{-6.5, 0.0}, 4.0);
  CHECK(largest_component_size(g, left) == 4);
}

TEST_CASE("preclusters: reach zero equals in-cube components") {
  auto cloud = attach_marks(sample_poisson(BoxDomain::cube(2, 16.0), 1.0, 5), 6);
  auto g = build_graph_naive(cloud, KernelSpec::long_range(2, 2.0, 1.5), 7);
  BoxDomain cube = BoxDomain::cube(2, 8.0);
  auto pcs = preclusters(g, cube, 0.0);
  auto sub = induced_subgraph(g, cube);
  auto part = components(sub);
  // same multiset of component sizes
  std::vector<std::size_t> a, b;
  for (const auto& s : pcs) a.push_back(s.size());
  auto lists = part.component_lists();
  for (const auto& l : lists) b.push_back(l.size());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  CHECK(a == b);
}

TEST_CASE("preclusters: outside path joins two in-cube clusters") {
  // cube [-2,2): clusters {0,1} and {2,3} joined via vertices 4,5 outside
  auto mc = hand_cloud(1, {{-1.5}, {-1.0}, {1.0}, {1.5}, {2.5}, {3.0}});
  auto g = GeoGraph::from_edges(
      mc, {{0, 1}, {2, 3}, {3, 4}, {4, 5}, {5, 0}});  // ring through outside
  BoxDomain cube = BoxDomain::cube(1, 4.0);
  auto near = preclusters(g, cube, 0.0);
  CHECK(near.size() == 2);
  auto far = preclusters(g, cube, 2.0);  // reach covers the outside path
  REQUIRE(far.size() == 1);
  CHECK(far[0].size() == 4);
  // oracle: BFS on the full graph restricted to the reach box
  auto oracle = testsupport::bfs_components(g);
  CHECK(oracle[0] == oracle[2]);

  // empty cube
  BoxDomain off = BoxDomain::cube_at(std::vector<double>{-3.4}, 0.5);
  CHECK(preclusters(g, off, 0.0).empty());

  // clipping flag
  bool clipped = false;
  preclusters(g, cube, 100.0, &clipped);
  CHECK(clipped);
  bool unclipped = true;
  preclusters(g, BoxDomain::cube(1, 2.0), 0.1, &unclipped);
  CHECK_FALSE(unclipped);
}

TEST_CASE("maximal precluster: size, mark tie-break, degenerate tie") {
  // two clusters of size 2 each inside the cube, marks decide
  auto mc = hand_cloud(1, {{-1.5}, {-1.0}, {1.0}, {1.5}},
                       {0.2, 0.9, 0.4, 0.8});
  auto g = GeoGraph::from_edges(mc, {{0, 1}, {2, 3}});
  BoxDomain cube = BoxDomain::cube(1, 4.0);
  auto best = maximal_precluster(g, cube, 0.0);
  REQUIRE(best.size() == 2);
  CHECK((best[0] == 0 && best[1] == 1));  // min mark 0.2 beats 0.4

  // unique largest wins regardless of marks
  auto mc2 = hand_cloud(1, {{-1.5}, {-1.0}, {-0.5}, {1.0}, {1.5}},
                        {0.9, 0.8, 0.95, 0.01, 0.02});
  auto g2 = GeoGraph::from_edges(mc2, {{0, 1}, {1, 2}, {3, 4}});
  auto best2 = maximal_precluster(g2, cube, 0.0);
  CHECK(best2.size() == 3);

  // exact size and min-mark tie: degenerate, empty result
  auto mc3 = hand_cloud(1, {{-1.5}, {-1.0}, {1.0}, {1.5}}, {0.3, 0.7, 0.3, 0.9});
  auto g3 = GeoGraph::from_edges(mc3, {{0, 1}, {2, 3}});
  CHECK(maximal_precluster(g3, cube, 0.0).empty());

  // empty cube
  BoxDomain off = BoxDomain::cube_at(std::vector<double>{-3.2}, 0.2);
  CHECK(maximal_precluster(g, off, 0.0).empty());
}

TEST_CASE("estimate_theta: degenerate retentions") {
  ModelSpec model;
  model.dim = 2;
  model.source = PointSource::poisson;
  model.source_param = 1.0;
  model.kernel = KernelSpec::long_range(2, 4.0, 1.5);
  model.builder = BuilderMethod::cells;

  auto zero = estimate_theta(model, 0.0, 16.0, 2.0, 40, 3);
  CHECK(zero.value == 0.0);

  // complete-connection kernel: every pair joined, origin reaches boundary
  ModelSpec sure = model;
  sure.kernel = KernelSpec::long_range(2, 1e12, 0.5);
  auto one = estimate_theta(sure, 1.0, 16.0, 2.0, 40, 3);
  CHECK(one.value == 1.0);
  CHECK_THROWS_AS(estimate_theta(model, 0.5, 16.0, 2.0, 0, 3), ParameterError);
}

TEST_CASE("estimate_theta: origin-to-boundary proxy shrinks with the box") {
  ModelSpec model;
  model.dim = 2;
  model.kernel = KernelSpec::long_range(2, 4.0, 1.5);
  const long reps = 60;
  double prev = 2.0;
  double prev_ci = 0.0;
  for (double n : {20.0, 40.0, 80.0}) {
    auto est = estimate_theta(model, 1.0, n, 2.0, reps, 11);
    CHECK(est.value <= prev + prev_ci + est.ci_half + 1e-12);
    prev = est.value;
    prev_ci = est.ci_half;
  }
}

TEST_CASE("sublinear_cluster_prob: degenerate and supercritical trends") {
  ModelSpec model;
  model.dim = 2;
  model.kernel = KernelSpec::long_range(2, 0.001, 1.5);  // deeply subcritical
  auto low = sublinear_cluster_prob(model, 0.9, 24.0, 50, 5);
  CHECK(low.value == doctest::Approx(0.0).epsilon(1e-12));

  ModelSpec sure = model;
  sure.kernel = KernelSpec::long_range(2, 1e12, 0.5);  // complete connections
  auto high = sublinear_cluster_prob(sure, 0.5, 12.0, 50, 5);
  CHECK(high.value == 1.0);

  ModelSpec super = model;
  super.kernel = KernelSpec::long_range(2, 4.0, 1.5);
  const long reps = 60;
  double prev = -1.0, prev_ci = 0.0;
  for (double n : {20.0, 40.0, 80.0}) {
    auto est = sublinear_cluster_prob(super, 0.8, n, reps, 13);
    CHECK(est.value >= prev - prev_ci - est.ci_half - 1e-12);
    prev = est.value;
    prev_ci = est.ci_half;
  }
  CHECK(prev > 0.9);
  CHECK_THROWS_AS(sublinear_cluster_prob(model, 1.2, 10.0, 10, 1), ParameterError);
}

TEST_CASE("estimate_theta is monotone in p under shared seeds (per replica coupling)") {
  ModelSpec model;
  model.dim = 2;
  model.kernel = KernelSpec::long_range(2, 4.0, 1.5);
  const long reps = 80;
  double prev = -1.0;
  for (double p : {0.2, 0.5, 0.8, 1.0}) {
    auto est = estimate_theta(model, p, 24.0, 2.0, reps, 17);
    CHECK(est.value >= prev - 1e-12);  // exact coupling: no CI slack needed
    prev = est.value;
  }
}
