#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "perclab/kernels.hpp"

namespace perclab {

/// A finite mark collection together with the regularity exponent mu.
struct MarkCollection {
  std::vector<double> values;  // in (0,1)
  double mu = 0.25;            // in (0,1/2)

  void validate() const;
  /// |I(mu, M)| = floor(|M|^{1-mu}).
  std::size_t quantile_count() const;
};

/// Quantile-count regularity: N_i >= (|M|/2) * (i/|I|) for every i in I,
/// where N_i counts marks <= i/|I|.
bool is_mu_regular(const MarkCollection& m);

/// Whether some `v` of the given marks form a mu-regular collection. Exact:
/// the v smallest marks maximize every N_i, so testing them suffices.
bool has_regular_subset(const std::vector<double>& marks, std::size_t v, double mu);

/// Lower bound on the probability that n i.i.d. uniform marks are
/// mu-regular: 1 - n^{1-mu} e^{-n^mu / 8}. May be <= 0 for small n; then
/// `vacuous` (if given) is set.
double regularity_bound(std::uint64_t n, double mu, bool* vacuous = nullptr);

/// Deterministic lower bound on the probability that two disjoint
/// (mu,v)-regular vertex sets within diameter D are joined by an edge:
/// 1 - exp(-C v^2 \int\int_{[v^{-(1-mu)}, 1-v^{-(1-mu)}]^2} phi(s,t,D)).
double connection_bound(const KernelSpec& kernel, std::uint64_t v, double mu, double D,
                        double C);

/// Monte Carlo validation reports, serialized as one JSON object per check.
struct LemmaReport {
  std::string lemma;  // "mark_regularity" | "cluster_connection"
  std::map<std::string, double> params;
  double bound = 0.0;      // the bound on the reported empirical quantity
  double empirical = 0.0;  // failure rate (regularity) / connection rate
  double sigma = 0.0;      // binomial standard error at the bound
  bool pass = false;
  bool vacuous = false;

  std::string to_json() const;
};

/// Draw `trials` i.i.d. Uniform(0,1)^n collections; pass when the empirical
/// non-regularity frequency does not exceed the bound plus 3 sigma.
LemmaReport mc_check_regularity(std::uint64_t n, double mu, long trials,
                                std::uint64_t seed, int threads = 1);

/// Per trial: rejection-sample two disjoint mu-regular mark sets of size v,
/// place all pairs at distance exactly D and draw the v^2 edge indicators;
/// pass when the empirical connection frequency is at least
/// connection_bound(.., C) - 3 sigma. C defaults to 1/9 (caller-overridable).
LemmaReport mc_check_connection(const KernelSpec& kernel, std::uint64_t v, double mu,
                                double D, long trials, std::uint64_t seed,
                                double C = 1.0 / 9.0, long retry_budget = 10000,
                                int threads = 1);

}  // namespace perclab
