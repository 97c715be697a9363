#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "perclab/errors.hpp"
#include "perclab/regularity.hpp"
#include "support/stats_oracle.hpp"

using namespace perclab;

namespace {

// literal transcription of the quantile-count definition, for cross-checking
bool regular_reference(const std::vector<double>& marks, double mu) {
  const double n = static_cast<double>(marks.size());
  const auto q = static_cast<std::size_t>(std::floor(std::pow(n, 1.0 - mu)));
  for (std::size_t i = 1; i <= q; ++i) {
    std::size_t count = 0;
    for (double s : marks)
      if (s <= static_cast<double>(i) / static_cast<double>(q)) ++count;
    if (static_cast<double>(count) < (n / 2.0) * (static_cast<double>(i) / q)) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("mu-regularity: saturating and vanishing counts") {
  // all marks below the first quantile: every count saturates
  MarkCollection low{std::vector<double>(20, 0.01), 0.3};
  CHECK(is_mu_regular(low));

  // all marks above the last quantile boundary: N_1 = 0 fails immediately
  MarkCollection high{std::vector<double>(20, 0.999), 0.3};
  CHECK_FALSE(is_mu_regular(high));

  CHECK_THROWS_AS(is_mu_regular(MarkCollection{{}, 0.3}), ParameterError);
  CHECK_THROWS_AS(is_mu_regular(MarkCollection{{0.5}, 0.6}), ParameterError);
  CHECK_THROWS_AS(is_mu_regular(MarkCollection{{1.5}, 0.3}), ParameterError);
}

TEST_CASE("mu-regularity: evenly spread ten-point collection (hand evaluation)") {
  // n=10, mu=0.4: q = floor(10^0.6) = 3; counts 3/7/10 against 5/3, 10/3, 5
  std::vector<double> marks;
  for (int i = 0; i < 10; ++i) marks.push_back(0.05 + 0.1 * i);
  MarkCollection m{marks, 0.4};
  CHECK(is_mu_regular(m));
  CHECK(m.quantile_count() == 3);
  CHECK(regular_reference(marks, 0.4));
}

TEST_CASE("mu-regularity: matches the literal definition on random collections") {
  std::mt19937 gen(3);
  std::uniform_real_distribution<double> unif(0.001, 0.999);
  for (int it = 0; it < 300; ++it) {
    std::size_t n = 5 + gen() % 60;
    std::vector<double> marks(n);
    for (auto& s : marks) s = unif(gen);
    double mu = 0.1 + 0.35 * unif(gen);
    MarkCollection mc{marks, mu};
    CHECK(is_mu_regular(mc) == regular_reference(marks, mu));
  }
}

TEST_CASE("mu-regularity: permutation invariant, monotone under mark decrease") {
  std::mt19937 gen(7);
  std::uniform_real_distribution<double> unif(0.001, 0.999);
  for (int it = 0; it < 200; ++it) {
    std::size_t n = 8 + gen() % 40;
    std::vector<double> marks(n);
    for (auto& s : marks) s = unif(gen);
    MarkCollection mc{marks, 0.3};
    bool reg = is_mu_regular(mc);

    std::shuffle(marks.begin(), marks.end(), gen);
    CHECK(is_mu_regular(MarkCollection{marks, 0.3}) == reg);

    if (reg) {
      // lowering any one mark keeps every count at least as large
      std::size_t pick = gen() % n;
      marks[pick] *= 0.5 * unif(gen);
      CHECK(is_mu_regular(MarkCollection{marks, 0.3}));
    }
  }
}

TEST_CASE("has_regular_subset: smallest marks are the exact reduction") {
  std::mt19937 gen(13);
  std::uniform_real_distribution<double> unif(0.001, 0.999);
  for (int it = 0; it < 150; ++it) {
    std::size_t n = 6 + gen() % 8;   // small enough for exhaustive search
    std::size_t v = 3 + gen() % (n - 3);
    std::vector<double> marks(n);
    for (auto& s : marks) s = unif(gen);
    double mu = 0.15 + 0.3 * unif(gen);

    // exhaustive: any v-subset regular?
    bool any = false;
    std::vector<bool> sel(n, false);
    std::fill(sel.begin(), sel.begin() + static_cast<long>(v), true);
    std::sort(sel.begin(), sel.end());
    do {
      std::vector<double> sub;
      for (std::size_t i = 0; i < n; ++i)
        if (sel[i]) sub.push_back(marks[i]);
      if (is_mu_regular(MarkCollection{sub, mu})) {
        any = true;
        break;
      }
    } while (std::next_permutation(sel.begin(), sel.end()));

    CHECK(has_regular_subset(marks, v, mu) == any);
  }
}

TEST_CASE("regularity bound: frozen values and vacuous flag") {
  bool vac = true;
  double b = regularity_bound(1000000, 0.4, &vac);
  CHECK_FALSE(vac);
  // failure part rounds to 9.2e-11 (two significant figures)
  double fail = 1.0 - b;
  CHECK(fail > 9.15e-11);
  CHECK(fail < 9.25e-11);

  // small n: bound is vacuous (failure part ~ 87 at n=1e4, mu=0.3)
  double b2 = regularity_bound(10000, 0.3, &vac);
  CHECK(vac);
  CHECK(1.0 - b2 == doctest::Approx(87.0186).epsilon(1e-3));

  // monotone doubling scan at mu = 0.3; the failure factor n^{1-mu} e^{-n^mu/8}
  // peaks near n ~ 1.7e4, so the scan starts above it
  double prev = regularity_bound(20000, 0.3);
  for (std::uint64_t n = 40000; n <= 2560000; n *= 2) {
    double cur = regularity_bound(n, 0.3);
    CHECK(cur >= prev);
    prev = cur;
  }
}

TEST_CASE("connection bound: degenerate kernels and quadrature cross-check") {
  auto none = KernelSpec::bernoulli_nn(2, 0.0);  // phi == 0
  CHECK(connection_bound(none, 100, 0.3, 50.0, 1.0 / 9.0) == 0.0);

  auto sure = KernelSpec::long_range(2, 1e300, 0.1);
  CHECK(connection_bound(sure, 100, 0.3, 2.0, 1.0 / 9.0) == doctest::Approx(1.0));

  // independent quadrature oracle (trapezoid refinement, marks constant here)
  auto lr = KernelSpec::long_range(2, 1.0, 1.5);
  const std::uint64_t v = 1000;
  const double mu = 0.3, D = 50.0, C = 1.0 / 9.0;
  double lo = std::pow(static_cast<double>(v), -(1.0 - mu));
  double phi = 1.0 * std::pow(D, -1.5 * 2.0);
  double integral = phi * (1.0 - 2.0 * lo) * (1.0 - 2.0 * lo);
  double expect = 1.0 - std::exp(-C * 1e6 * integral);
  CHECK(connection_bound(lr, v, mu, D, C) == doctest::Approx(expect).epsilon(1e-6));
}

TEST_CASE("mc regularity: huge n never fails, vacuous small-n auto passes") {
  // fast smoke at n=1e5 (acceptance runs the full n=1e6 case)
  LemmaReport rep = mc_check_regularity(100000, 0.4, 200, 99);
  CHECK(rep.lemma == "mark_regularity");
  CHECK_FALSE(rep.vacuous);
  CHECK(rep.empirical == 0.0);
  CHECK(rep.pass);

  LemmaReport vac = mc_check_regularity(10000, 0.3, 100, 5);
  CHECK(vac.vacuous);
  CHECK(vac.pass);           // vacuous bound auto-passes
  CHECK(vac.empirical >= 0.0);  // empirical rate still recorded
  CHECK(vac.bound == 1.0);      // clamped for the report

  CHECK_THROWS_AS(mc_check_regularity(100, 0.3, 10, 1), ParameterError);
}

TEST_CASE("mc connection: degenerate kernels") {
  auto sure = KernelSpec::long_range(1, 1e300, 0.1);
  LemmaReport rep = mc_check_connection(sure, 50, 0.3, 10.0, 100, 7);
  CHECK(rep.empirical == 1.0);
  CHECK(rep.pass);

  auto none = KernelSpec::bernoulli_nn(1, 0.0);
  LemmaReport rep0 = mc_check_connection(none, 50, 0.3, 10.0, 100, 7);
  CHECK(rep0.empirical == 0.0);
  CHECK(rep0.bound == 0.0);
  CHECK(rep0.pass);
}

TEST_CASE("mc connection: long-range cell with exact per-trial oracle") {
  auto lr = KernelSpec::long_range(1, 1.0, 1.2);
  const std::uint64_t v = 200;
  const double mu = 0.3, D = 1000.0;
  LemmaReport rep = mc_check_connection(lr, v, mu, D, 1000, 31);
  CHECK(rep.pass);

  // marks do not matter for long_range: per-trial connection probability is
  // exactly 1 - exp(-v^2 phi(D)); the empirical rate must sit within 4 sigma
  double phi = std::pow(D, -1.2);
  double p_exact = 1.0 - std::exp(-static_cast<double>(v) * static_cast<double>(v) * phi);
  double sigma = std::sqrt(p_exact * (1.0 - p_exact) / 1000.0);
  CHECK(std::fabs(rep.empirical - p_exact) < 4.0 * sigma);
  CHECK(rep.empirical >= rep.bound - 3.0 * rep.sigma);
}
