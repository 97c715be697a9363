#include "perclab/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "perclab/errors.hpp"
#include "perclab/parallel.hpp"
#include "perclab/rng.hpp"

namespace perclab {

void MarkCollection::validate() const {
  if (values.empty()) throw ParameterError("MarkCollection: values must be nonempty");
  if (!(mu > 0.0 && mu < 0.5)) throw ParameterError("MarkCollection: mu must be in (0,1/2)");
  for (double v : values)
    if (!(v > 0.0 && v < 1.0))
      throw ParameterError("MarkCollection: marks must lie strictly in (0,1)");
}

std::size_t MarkCollection::quantile_count() const {
  return static_cast<std::size_t>(
      std::floor(std::pow(static_cast<double>(values.size()), 1.0 - mu)));
}

namespace {

// Counts N_i via a bucket histogram: bucket b holds marks in ((b-1)/q, b/q].
bool regular_from_buckets(const std::vector<double>& marks, std::size_t q, double n_half) {
  if (q == 0) return true;
  std::vector<std::uint64_t> buckets(q + 1, 0);
  const double qd = static_cast<double>(q);
  for (double s : marks) {
    auto b = static_cast<std::size_t>(std::ceil(s * qd));
    if (b > q) b = q;  // s in ((q-1)/q, 1)
    if (b == 0) b = 1;
    ++buckets[b];
  }
  std::uint64_t cum = 0;
  for (std::size_t i = 1; i <= q; ++i) {
    cum += buckets[i];
    if (static_cast<double>(cum) < n_half * static_cast<double>(i) / qd) return false;
  }
  return true;
}

}  // namespace

bool is_mu_regular(const MarkCollection& m) {
  m.validate();
  return regular_from_buckets(m.values, m.quantile_count(),
                              static_cast<double>(m.values.size()) / 2.0);
}

bool has_regular_subset(const std::vector<double>& marks, std::size_t v, double mu) {
  if (v == 0) return true;
  if (marks.size() < v) return false;
  // v smallest marks dominate every candidate subset in every count N_i
  std::vector<double> smallest(marks);
  std::nth_element(smallest.begin(), smallest.begin() + static_cast<long>(v) - 1,
                   smallest.end());
  smallest.resize(v);
  MarkCollection mc{std::move(smallest), mu};
  return is_mu_regular(mc);
}

double regularity_bound(std::uint64_t n, double mu, bool* vacuous) {
  if (n < 1) throw ParameterError("regularity_bound: n must be >= 1");
  if (!(mu > 0.0 && mu < 0.5))
    throw ParameterError("regularity_bound: mu must be in (0,1/2)");
  const double nd = static_cast<double>(n);
  double fail = std::pow(nd, 1.0 - mu) * std::exp(-std::pow(nd, mu) / 8.0);
  double bound = 1.0 - fail;
  if (vacuous) *vacuous = bound <= 0.0;
  return bound;
}

double connection_bound(const KernelSpec& kernel, std::uint64_t v, double mu, double D,
                        double C) {
  if (v < 1) throw ParameterError("connection_bound: v must be >= 1");
  if (!(mu > 0.0 && mu < 0.5))
    throw ParameterError("connection_bound: mu must be in (0,1/2)");
  if (!(D > 0.0)) throw ParameterError("connection_bound: D must be positive");
  if (!(C > 0.0)) throw ParameterError("connection_bound: C must be positive");
  const double lo = std::pow(static_cast<double>(v), -(1.0 - mu));
  double integral = mark_integral_bounds(kernel, D, lo);
  double exponent = C * static_cast<double>(v) * static_cast<double>(v) * integral;
  return -std::expm1(-exponent);
}

std::string LemmaReport::to_json() const {
  std::ostringstream os;
  os.precision(17);
  os << "{\"lemma\":\"" << lemma << "\",\"params\":{";
  bool first = true;
  for (const auto& [k, val] : params) {
    if (!first) os << ",";
    first = false;
    os << "\"" << k << "\":" << val;
  }
  os << "},\"bound\":" << bound << ",\"empirical\":" << empirical
     << ",\"sigma\":" << sigma << ",\"pass\":" << (pass ? "true" : "false")
     << ",\"vacuous\":" << (vacuous ? "true" : "false") << "}";
  return os.str();
}

LemmaReport mc_check_regularity(std::uint64_t n, double mu, long trials,
                                std::uint64_t seed, int threads) {
  if (trials < 100) throw ParameterError("mc_check_regularity: trials must be >= 100");
  bool vac = false;
  double success_bound = regularity_bound(n, mu, &vac);
  const double fail_bound = 1.0 - success_bound;

  const auto q = static_cast<std::size_t>(
      std::floor(std::pow(static_cast<double>(n), 1.0 - mu)));
  const double n_half = static_cast<double>(n) / 2.0;

  std::vector<char> failures(static_cast<size_t>(trials), 0);
  parallel_for(static_cast<size_t>(trials), threads, [&](std::size_t t) {
    RngStream rng(seed, make_stream_id(StreamPurpose::trial, t));
    // bucket counts directly; the full collection never needs storing
    std::vector<std::uint64_t> buckets(q + 1, 0);
    const double qd = static_cast<double>(q);
    for (std::uint64_t i = 0; i < n; ++i) {
      double s = rng.uniform();
      auto b = static_cast<std::size_t>(std::ceil(s * qd));
      if (b > q) b = q;
      if (b == 0) b = 1;
      ++buckets[b];
    }
    std::uint64_t cum = 0;
    bool regular = true;
    for (std::size_t i = 1; i <= q; ++i) {
      cum += buckets[i];
      if (static_cast<double>(cum) < n_half * static_cast<double>(i) / qd) {
        regular = false;
        break;
      }
    }
    failures[t] = regular ? 0 : 1;
  });

  long fail_count = 0;
  for (char f : failures) fail_count += f;

  LemmaReport rep;
  rep.lemma = "mark_regularity";
  rep.params = {{"n", static_cast<double>(n)},
                {"mu", mu},
                {"trials", static_cast<double>(trials)}};
  rep.vacuous = vac;
  rep.bound = std::min(1.0, fail_bound);
  rep.empirical = static_cast<double>(fail_count) / static_cast<double>(trials);
  double b = std::clamp(fail_bound, 0.0, 1.0);
  rep.sigma = std::sqrt(b * (1.0 - b) / static_cast<double>(trials));
  rep.pass = vac || rep.empirical <= fail_bound + 3.0 * rep.sigma;
  return rep;
}

LemmaReport mc_check_connection(const KernelSpec& kernel, std::uint64_t v, double mu,
                                double D, long trials, std::uint64_t seed, double C,
                                long retry_budget, int threads) {
  if (trials < 100) throw ParameterError("mc_check_connection: trials must be >= 100");
  double bound = connection_bound(kernel, v, mu, D, C);

  std::vector<char> connected(static_cast<size_t>(trials), 0);
  parallel_for(static_cast<size_t>(trials), threads, [&](std::size_t t) {
    RngStream rng(seed, make_stream_id(StreamPurpose::trial, t));
    auto draw_regular_set = [&](std::vector<double>& marks) {
      for (long attempt = 0; attempt < retry_budget; ++attempt) {
        marks.resize(v);
        for (auto& s : marks) s = rng.uniform();
        if (regular_from_buckets(
                marks,
                static_cast<std::size_t>(
                    std::floor(std::pow(static_cast<double>(v), 1.0 - mu))),
                static_cast<double>(v) / 2.0))
          return;
      }
      throw ResourceError("mc_check_connection: rejection sampling budget exhausted");
    };
    std::vector<double> s_marks, t_marks;
    draw_regular_set(s_marks);
    draw_regular_set(t_marks);
    // all pairs sit at distance exactly D; stop at the first edge
    bool hit = false;
    for (std::uint64_t i = 0; i < v && !hit; ++i) {
      for (std::uint64_t j = 0; j < v; ++j) {
        double p = kernel.edge_prob(s_marks[i], t_marks[j], D);
        if (p > 0.0 && rng.uniform() <= p) {
          hit = true;
          break;
        }
      }
    }
    connected[t] = hit ? 1 : 0;
  });

  long hit_count = 0;
  for (char c : connected) hit_count += c;

  LemmaReport rep;
  rep.lemma = "cluster_connection";
  rep.params = {{"v", static_cast<double>(v)}, {"mu", mu},     {"D", D},
                {"C", C},                      {"d", static_cast<double>(kernel.dim)},
                {"trials", static_cast<double>(trials)}};
  rep.bound = bound;
  rep.empirical = static_cast<double>(hit_count) / static_cast<double>(trials);
  rep.sigma = std::sqrt(std::clamp(bound, 0.0, 1.0) * (1.0 - std::clamp(bound, 0.0, 1.0)) /
              static_cast<double>(trials));
  rep.pass = rep.empirical >= bound - 3.0 * rep.sigma;
  rep.vacuous = bound <= 0.0;
  return rep;
}

}  // namespace perclab
