#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "perclab/rng.hpp"
#include "support/stats_oracle.hpp"

using namespace perclab;

// Random123 known-answer vectors for philox4x32-10.
TEST_CASE("philox known-answer vectors") {
  auto out = philox4x32(0, {0, 0, 0, 0});
  CHECK(out[0] == 0x6627e8d5u);
  CHECK(out[1] == 0xe169c58du);
  CHECK(out[2] == 0xbc57ac4cu);
  CHECK(out[3] == 0x9b00dbd8u);

  out = philox4x32(0xffffffffffffffffull,
                   {0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu});
  CHECK(out[0] == 0x408f276du);
  CHECK(out[1] == 0x41c83b0eu);
  CHECK(out[2] == 0xa20bc7c6u);
  CHECK(out[3] == 0x6d5451fdu);

  // key words (k0,k1) = (0xa4093822, 0x299f31d0) packed low-high
  out = philox4x32(0x299f31d0a4093822ull,
                   {0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u});
  CHECK(out[0] == 0xd16cfe09u);
  CHECK(out[1] == 0x94fdccebu);
  CHECK(out[2] == 0x5001e420u);
  CHECK(out[3] == 0x24126ea1u);
}

TEST_CASE("streams are deterministic and purpose-separated") {
  RngStream a(42, make_stream_id(StreamPurpose::trial, 7));
  RngStream b(42, make_stream_id(StreamPurpose::trial, 7));
  RngStream c(42, make_stream_id(StreamPurpose::walker, 7));
  for (int i = 0; i < 100; ++i) {
    double ua = a.uniform();
    CHECK(ua == b.uniform());
    CHECK(ua > 0.0);
    CHECK(ua < 1.0);
  }
  bool differs = false;
  RngStream a2(42, make_stream_id(StreamPurpose::trial, 7));
  for (int i = 0; i < 100; ++i)
    if (a2.uniform() != c.uniform()) differs = true;
  CHECK(differs);
}

TEST_CASE("uniforms pass a KS test") {
  RngStream rng(2024, make_stream_id(StreamPurpose::generic, 1));
  std::vector<double> sample(100000);
  for (auto& x : sample) x = rng.uniform();
  CHECK(testsupport::ks_distance_uniform(sample) <
        testsupport::ks_critical_001(sample.size()));
}

TEST_CASE("poisson sampling matches the pmf for small and large means") {
  for (double mean : {1.0, 50.0}) {
    RngStream rng(7, make_stream_id(StreamPurpose::generic, mean == 1.0 ? 0 : 1));
    const int reps = 20000;
    const int kmax = mean == 1.0 ? 12 : 120;
    std::vector<std::uint64_t> hist(static_cast<size_t>(kmax) + 1, 0);
    for (int i = 0; i < reps; ++i) {
      auto k = rng.poisson(mean);
      if (k > static_cast<std::uint64_t>(kmax)) k = kmax;
      ++hist[k];
    }
    std::vector<double> expect(static_cast<size_t>(kmax) + 1);
    double tail = 1.0;
    for (int k = 0; k < kmax; ++k) {
      expect[k] = reps * testsupport::poisson_pmf(k, mean);
      tail -= testsupport::poisson_pmf(k, mean);
    }
    expect[kmax] = reps * std::max(tail, 0.0);
    CHECK(testsupport::chi2_gof_pvalue(hist, expect) > 0.01);
  }
}

TEST_CASE("point and pair stream ids depend on coordinates") {
  const double p1[] = {1.0, 2.0};
  const double p2[] = {1.0, 2.5};
  auto id1 = stream_for_point(StreamPurpose::vertex_mark, {p1, 2});
  auto id2 = stream_for_point(StreamPurpose::vertex_mark, {p2, 2});
  CHECK((id1.w0 != id2.w0 || id1.w1 != id2.w1 || id1.w2 != id2.w2));

  auto pa = stream_for_pair(StreamPurpose::edge, {p1, 2}, {p2, 2});
  auto pb = stream_for_pair(StreamPurpose::edge, {p1, 2}, {p2, 2});
  CHECK(pa.w0 == pb.w0);
  CHECK(pa.w1 == pb.w1);
  CHECK(pa.w2 == pb.w2);
}

TEST_CASE("derived seeds spread") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(derive_seed(5, i));
  CHECK(seen.size() == 1000);
}
