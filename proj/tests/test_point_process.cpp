#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "perclab/errors.hpp"
#include "perclab/point_process.hpp"
#include "support/stats_oracle.hpp"

using namespace perclab;

TEST_CASE("poisson: unit cube at intensity 1 has mean count 1") {
  const int reps = 4000;
  double total = 0;
  for (int r = 0; r < reps; ++r)
    total += static_cast<double>(sample_poisson(BoxDomain::cube(2, 1.0), 1.0, r).size());
  double mean = total / reps;
  // 3 sigma around 1 with sigma = 1/sqrt(reps)
  CHECK(std::fabs(mean - 1.0) < 3.0 / std::sqrt(static_cast<double>(reps)));
}

TEST_CASE("poisson: zero-volume box gives an empty cloud") {
  BoxDomain flat = BoxDomain::cube(2, 1.0);
  flat.sides[1] = 0.0;
  CHECK(sample_poisson(flat, 1.0, 9).size() == 0);
}

TEST_CASE("poisson: parameter errors") {
  CHECK_THROWS_AS(sample_poisson(BoxDomain::cube(2, 1.0), 0.0, 1), ParameterError);
  CHECK_THROWS_AS(sample_poisson(BoxDomain::cube(2, 1.0), -2.0, 1), ParameterError);
}

TEST_CASE("poisson: box counts are chi-square compatible with the pmf") {
  // 10x10 box at intensity 1: total count ~ Poisson(100)
  const int reps = 10000;
  const int kmax = 160;
  std::vector<std::uint64_t> hist(kmax + 1, 0);
  for (int r = 0; r < reps; ++r) {
    auto n = sample_poisson(BoxDomain::cube(2, 10.0), 1.0, 50000 + r).size();
    ++hist[std::min<std::size_t>(n, kmax)];
  }
  std::vector<double> expect(kmax + 1, 0.0);
  double tail = 1.0;
  for (int k = 0; k < kmax; ++k) {
    expect[k] = reps * testsupport::poisson_pmf(k, 100.0);
    tail -= testsupport::poisson_pmf(k, 100.0);
  }
  expect[kmax] = reps * std::max(tail, 0.0);
  CHECK(testsupport::chi2_gof_pvalue(hist, expect) > 0.01);
}

TEST_CASE("poisson: counts on disjoint sub-boxes are uncorrelated") {
  const int reps = 4000;
  double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (int r = 0; r < reps; ++r) {
    PointCloud c = sample_poisson(BoxDomain::cube(1, 20.0), 1.0, 999 + r);
    double left = 0, right = 0;
    for (std::size_t i = 0; i < c.size(); ++i)
      (c.point(i)[0] < 0 ? left : right) += 1.0;
    sx += left;
    sy += right;
    sxx += left * left;
    syy += right * right;
    sxy += left * right;
  }
  double n = reps;
  double corr = (n * sxy - sx * sy) /
                std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
  CHECK(std::fabs(corr) < 4.0 / std::sqrt(n));
}

TEST_CASE("lattice: full retention fills the box exactly") {
  CHECK(sample_lattice(BoxDomain::cube(2, 10.0), 1.0, 3).size() == 100);
  CHECK(sample_lattice(BoxDomain::cube(2, 10.0), 0.0, 3).size() == 0);
  CHECK_THROWS_AS(sample_lattice(BoxDomain::cube(2, 10.0), 1.5, 3), ParameterError);
}

TEST_CASE("lattice: retained count concentrates at retention * sites") {
  const int reps = 1000;
  double total = 0;
  for (int r = 0; r < reps; ++r)
    total += static_cast<double>(sample_lattice(BoxDomain::cube(2, 100.0), 0.5, r).size());
  double mean = total / reps;
  // sites = 1e4, sd of the mean = sqrt(1e4 * 0.25 / reps)
  double sigma = std::sqrt(1e4 * 0.25 / reps);
  CHECK(std::fabs(mean - 5000.0) < 3.5 * sigma);
}

TEST_CASE("marks: empty cloud, determinism, uniformity") {
  PointCloud empty;
  empty.domain = BoxDomain::cube(2, 1.0);
  CHECK(attach_marks(empty, 1).size() == 0);

  PointCloud c = sample_poisson(BoxDomain::cube(2, 40.0), 1.0, 8);
  MarkedCloud m1 = attach_marks(c, 77);
  MarkedCloud m2 = attach_marks(c, 77);
  CHECK(m1.marks == m2.marks);

  // big sample: KS against Uniform(0,1) at level 0.01
  PointCloud big = sample_poisson(BoxDomain::cube(2, 320.0), 1.0, 4);
  MarkedCloud mb = attach_marks(big, 5);
  CHECK(mb.size() > 90000);
  CHECK(testsupport::ks_distance_uniform(mb.marks) <
        testsupport::ks_critical_001(mb.size()));

  // independence of locations: correlation of mark vs first coordinate
  double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  double n = static_cast<double>(mb.size());
  for (std::size_t i = 0; i < mb.size(); ++i) {
    double x = mb.point(i)[0], y = mb.marks[i];
    sx += x;
    sy += y;
    sxx += x * x;
    syy += y * y;
    sxy += x * y;
  }
  double corr = (n * sxy - sx * sy) /
                std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
  CHECK(std::fabs(corr) < 4.0 / std::sqrt(n));
}

TEST_CASE("extension stability: nested boxes agree on the intersection") {
  MarkedCloud small = attach_marks(sample_poisson(BoxDomain::cube(2, 8.0), 1.0, 21), 22);
  MarkedCloud large = attach_marks(sample_poisson(BoxDomain::cube(2, 24.0), 1.0, 21), 22);
  BoxDomain inner = BoxDomain::cube(2, 8.0);

  std::size_t matched = 0;
  for (std::size_t i = 0; i < large.size(); ++i) {
    if (!inner.contains(large.point(i))) continue;
    bool found = false;
    for (std::size_t j = 0; j < small.size(); ++j) {
      if (large.point(i)[0] == small.point(j)[0] &&
          large.point(i)[1] == small.point(j)[1]) {
        CHECK(large.marks[i] == small.marks[j]);
        found = true;
        break;
      }
    }
    CHECK(found);
    ++matched;
  }
  CHECK(matched == small.size());

  MarkedCloud lsmall = attach_marks(sample_lattice(BoxDomain::cube(2, 6.0), 0.5, 3), 4);
  MarkedCloud llarge = attach_marks(sample_lattice(BoxDomain::cube(2, 20.0), 0.5, 3), 4);
  std::size_t inner_count = 0;
  for (std::size_t i = 0; i < llarge.size(); ++i)
    if (BoxDomain::cube(2, 6.0).contains(llarge.point(i))) ++inner_count;
  CHECK(inner_count == lsmall.size());
}

TEST_CASE("palm: origin vertex is inserted at index 0 with a fresh mark") {
  MarkedCloud mc = attach_marks(sample_poisson(BoxDomain::cube(2, 5.0), 1.0, 31), 32);
  std::size_t before = mc.size();
  MarkedCloud palm = palm_condition(mc);
  CHECK(palm.size() == before + 1);
  CHECK(palm.palm);
  CHECK(palm.point(0)[0] == 0.0);
  CHECK(palm.point(0)[1] == 0.0);
  CHECK(palm.marks[0] > 0.0);
  CHECK(palm.marks[0] < 1.0);

  // empty poisson cloud -> single vertex at the origin
  MarkedCloud none;
  none.base.domain = BoxDomain::cube(2, 5.0);
  none.base.source = PointSource::poisson;
  MarkedCloud lone = palm_condition(none);
  CHECK(lone.size() == 1);
  CHECK(lone.point(0)[0] == 0.0);

  // lattice: origin site forced present exactly once
  MarkedCloud lat = attach_marks(sample_lattice(BoxDomain::cube(2, 10.0), 1.0, 3), 4);
  MarkedCloud plat = palm_condition(lat);
  CHECK(plat.size() == lat.size());  // origin already there, replaced
  int origin_count = 0;
  for (std::size_t i = 0; i < plat.size(); ++i)
    if (plat.point(i)[0] == 0.0 && plat.point(i)[1] == 0.0) ++origin_count;
  CHECK(origin_count == 1);

  // origin outside the domain
  MarkedCloud shifted;
  shifted.base.domain = BoxDomain::cube(1, 2.0);
  shifted.base.domain.center[0] = 10.0;
  CHECK_THROWS_AS(palm_condition(shifted), ParameterError);
}

TEST_CASE("palm: Slivnyak identity, output minus origin is distributed as input") {
  // counts of palm(cloud) minus the origin vs Poisson(1) pmf
  const int reps = 10000;
  const int kmax = 9;
  std::vector<std::uint64_t> hist(kmax + 1, 0);
  for (int r = 0; r < reps; ++r) {
    MarkedCloud mc =
        attach_marks(sample_poisson(BoxDomain::cube(2, 1.0), 1.0, 70000 + r), 5);
    MarkedCloud palm = palm_condition(mc);
    std::size_t rest = palm.size() - 1;
    ++hist[std::min<std::size_t>(rest, kmax)];
  }
  std::vector<double> expect(kmax + 1, 0.0);
  double tail = 1.0;
  for (int k = 0; k < kmax; ++k) {
    expect[k] = reps * testsupport::poisson_pmf(k, 1.0);
    tail -= testsupport::poisson_pmf(k, 1.0);
  }
  expect[kmax] = reps * std::max(tail, 0.0);
  CHECK(testsupport::chi2_gof_pvalue(hist, expect) > 0.01);
}
