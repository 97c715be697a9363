#include "perclab/renorm.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <limits>

#include "perclab/errors.hpp"
#include "perclab/regularity.hpp"

namespace perclab {

namespace {

inline std::size_t ceil_count(double x) {
  if (x <= 0.0) return 0;
  return static_cast<std::size_t>(std::ceil(x - 1e-9));
}

// Centers of the sigma^d subcubes tiling a cube from its lower corner.
// For odd sigma this is the centred grid the half-open cube collections use.
std::vector<std::vector<double>> subcube_centers(const BoxDomain& cube, long sigma,
                                                 double sub_side) {
  const int d = cube.dim;
  std::vector<std::vector<double>> centers;
  std::vector<long> idx(static_cast<size_t>(d), 0);
  for (;;) {
    std::vector<double> c(static_cast<size_t>(d));
    for (int i = 0; i < d; ++i)
      c[i] = cube.lo(i) + (static_cast<double>(idx[i]) + 0.5) * sub_side;
    centers.push_back(std::move(c));
    int axis = d - 1;
    while (axis >= 0) {
      if (++idx[axis] < sigma) break;
      idx[axis] = 0;
      --axis;
    }
    if (axis < 0) break;
  }
  return centers;
}

// Pairwise adjacency (some graph edge between the sets) for disjoint
// candidate vertex sets, via one scan over the edge list.
std::vector<std::vector<char>> set_adjacency(const GeoGraph& graph,
                                             const std::vector<std::vector<std::uint32_t>>& sets) {
  constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> owner(graph.num_vertices(), kNone);
  for (std::size_t s = 0; s < sets.size(); ++s)
    for (std::uint32_t v : sets[s]) owner[v] = static_cast<std::uint32_t>(s);
  std::vector<std::vector<char>> adj(sets.size(), std::vector<char>(sets.size(), 0));
  for (const GeoEdge& e : graph.edges) {
    std::uint32_t sa = owner[e.a], sb = owner[e.b];
    if (sa == kNone || sb == kNone || sa == sb) continue;
    adj[sa][sb] = adj[sb][sa] = 1;
  }
  return adj;
}

// Pick `need` pairwise-adjacent nodes, at most one per group. Exhaustive
// DFS (with a node budget) for need <= 12, greedy with restarts beyond;
// a greedy miss is only a lower bound, reported via *exact.
struct CliqueSearch {
  const std::vector<std::vector<char>>& adj;
  std::vector<std::vector<int>> by_group;
  long need = 0;
  long budget = 2'000'000;
  std::vector<int> chosen;
  std::vector<int> result;
  bool found = false;

  void dfs(std::size_t gidx) {
    if (found || budget <= 0) return;
    --budget;
    if (static_cast<long>(chosen.size()) == need) {
      found = true;
      result = chosen;
      return;
    }
    if (gidx >= by_group.size()) return;
    if (static_cast<long>(chosen.size() + (by_group.size() - gidx)) < need) return;
    for (int node : by_group[gidx]) {
      bool ok = true;
      for (int c : chosen)
        if (!adj[static_cast<size_t>(c)][static_cast<size_t>(node)]) {
          ok = false;
          break;
        }
      if (!ok) continue;
      chosen.push_back(node);
      dfs(gidx + 1);
      chosen.pop_back();
      if (found) return;
    }
    dfs(gidx + 1);
  }
};

// groups[i] = group of node i.
bool find_group_clique(const std::vector<std::vector<char>>& adj,
                       const std::vector<int>& groups, int num_groups, long need,
                       std::vector<int>& out, bool* exact) {
  if (need <= 0) {
    out.clear();
    return true;
  }
  CliqueSearch cs{adj, {}, need};
  cs.by_group.resize(static_cast<size_t>(num_groups));
  for (std::size_t i = 0; i < groups.size(); ++i)
    cs.by_group[static_cast<size_t>(groups[i])].push_back(static_cast<int>(i));
  std::erase_if(cs.by_group, [](const std::vector<int>& g) { return g.empty(); });
  if (static_cast<long>(cs.by_group.size()) < need) return false;

  if (need <= 12) {
    cs.dfs(0);
    if (cs.budget > 0 || cs.found) {
      if (cs.found) out = cs.result;
      return cs.found;
    }
    // fell through the budget: degrade to greedy below
  }
  if (exact) *exact = false;
  // greedy with restart from every node
  for (std::size_t start = 0; start < groups.size(); ++start) {
    std::vector<int> pick{static_cast<int>(start)};
    std::vector<char> used_group(static_cast<size_t>(num_groups), 0);
    used_group[static_cast<size_t>(groups[start])] = 1;
    for (std::size_t n = 0; n < groups.size() && static_cast<long>(pick.size()) < need; ++n) {
      if (used_group[static_cast<size_t>(groups[n])]) continue;
      bool ok = true;
      for (int c : pick)
        if (!adj[static_cast<size_t>(c)][n]) {
          ok = false;
          break;
        }
      if (ok) {
        pick.push_back(static_cast<int>(n));
        used_group[static_cast<size_t>(groups[n])] = 1;
      }
    }
    if (static_cast<long>(pick.size()) >= need) {
      out = pick;
      return true;
    }
  }
  return false;
}

std::vector<double> set_marks(const GeoGraph& graph, const std::vector<std::uint32_t>& set) {
  std::vector<double> m;
  m.reserve(set.size());
  for (std::uint32_t v : set) m.push_back(graph.vertices.marks[v]);
  return m;
}

}  // namespace

// ----------------------------------------------------------- RenormParams

double RenormParams::m(int stage) const {
  double side = static_cast<double>(ell);
  for (int i = 1; i <= stage; ++i) side *= static_cast<double>(sigma_seq[static_cast<size_t>(i - 1)]);
  return side;
}

double RenormParams::v(int stage) const {
  double val = 0.5 * theta * std::pow(m(stage), dim);
  for (int i = 1; i <= stage; ++i) val *= rho_seq[static_cast<size_t>(i - 1)];
  return val;
}

long RenormParams::r(int stage) const {
  double rho_n = rho_seq[static_cast<size_t>(stage - 1)];
  double sig = std::pow(static_cast<double>(sigma_seq[static_cast<size_t>(stage - 1)]), dim);
  return static_cast<long>(std::ceil(rho_n * sig - 1e-9));
}

long RenormParams::stage0_threshold() const {
  return static_cast<long>(ceil_count(0.5 * theta * std::pow(static_cast<double>(ell), dim)));
}

std::vector<std::string> RenormParams::check() const {
  std::vector<std::string> bad;
  auto fail = [&](const std::string& id, const std::string& msg) {
    bad.push_back(id + ": " + msg);
  };
  if (dim < 1) fail("dimension", "d must be >= 1");
  if (ell < 2 || ell % 2 != 0) fail("base_side", "ell must be a positive even integer");
  if (!(theta > 0.0 && theta <= 1.0)) fail("density_target", "theta must be in (0,1]");
  if (!(lambda > 0.0 && lambda < 1.0)) fail("lambda_range", "lambda must be in (0,1)");
  if (!(mu_star > 0.0 && mu_star < 0.5)) fail("mu_star_range", "mu* must be in (0,1/2)");
  double nu_hi = 1.0 / (1.0 - mu_star);
  if (!(nu > 1.0 && nu < nu_hi))
    fail("exponent_nu", "nu must satisfy 1 < nu < 1/(1-mu*) (and < 2/decay when positive)");
  if (std::fabs(mu - (1.0 - nu * (1.0 - mu_star))) > 1e-9)
    fail("exponent_mu", "mu must equal 1 - nu(1-mu*)");
  if (!(mu > 0.0 && mu < 0.5)) fail("mu_range", "mu must be in (0,1/2)");
  double omega_lo = 2.0 * nu / (dim * (nu - 1.0));
  if (!(omega > omega_lo))
    fail("scale_exponent", "omega must exceed 2*nu/(d*(nu-1))");
  if (rho_seq.size() != sigma_seq.size())
    fail("sequence_length", "rho and sigma sequences must have equal length");
  for (std::size_t i = 0; i < rho_seq.size(); ++i) {
    if (!(rho_seq[i] < 0.25) || !(rho_seq[i] > 0.0)) {
      fail("density_cap", "rho_" + std::to_string(i + 1) + " must lie in (0, 1/4)");
      break;
    }
  }
  if (rho_seq.size() >= 3) {
    double c_last = rho_seq.back() * std::pow(static_cast<double>(rho_seq.size()), 2);
    double c_prev = rho_seq[rho_seq.size() - 2] *
                    std::pow(static_cast<double>(rho_seq.size() - 1), 2);
    if (std::fabs(c_last - c_prev) > 1e-6 * std::max(1.0, c_last) || !(c_last > 1.0))
      fail("density_limit", "rho_n * n^2 must stabilize at a constant in (1,inf)");
  }
  for (std::size_t i = 0; i < sigma_seq.size(); ++i) {
    if (sigma_seq[i] < 1 || sigma_seq[i] % 2 == 0) {
      fail("scale_parity", "sigma_" + std::to_string(i + 1) + " must be a positive odd integer");
      break;
    }
  }
  if (!sigma_seq.empty()) {
    // the growth window only binds eventually; check the last stored entry
    double n = static_cast<double>(sigma_seq.size());
    double lo = std::pow(n, omega);
    double hi = std::pow(1.0 + 1.0 / (n * n), 1.0 / dim) * lo;
    double s = static_cast<double>(sigma_seq.back());
    if (s < lo - 1e-9 || s > hi + 2.0)
      fail("scale_window",
           "sigma_n must eventually lie in [n^omega, (1+n^-2)^{1/d} n^omega]");
  }
  return bad;
}

RenormParams derive_params(const KernelSpec& kernel, int d, double theta_hat,
                           double lambda, long ell, double k_reach, int max_stage) {
  if (!(lambda > 0.0 && lambda < 1.0))
    throw ParameterError("derive_params: lambda must be in (0,1)");
  if (max_stage < 0) throw ParameterError("derive_params: max_stage must be >= 0");

  RenormParams p;
  p.dim = d;
  p.ell = ell;
  p.k_reach = k_reach;
  p.theta = theta_hat;
  p.lambda = lambda;

  // smallest grid mu* whose estimated decay clears 2 with margin 0.05
  const auto grid = geometric_grid(128.0, 2.0, 6);
  bool found = false;
  double decay = 0.0;
  for (double mu_c = 0.05; mu_c < 0.5; mu_c += 0.05) {
    DeltaEffEstimate est = estimate_delta_eff(kernel, mu_c, grid);
    if (est.slope < 2.0 - 0.05) {
      p.mu_star = mu_c;
      decay = est.slope;
      found = true;
      break;
    }
  }
  if (!found)
    throw ParameterError("derive_params: not in weak decay regime (no mu* with decay < 2)");

  double nu_hi = 1.0 / (1.0 - p.mu_star);
  if (decay > 0.0) nu_hi = std::min(nu_hi, 2.0 / decay);
  p.nu = 0.5 * (1.0 + nu_hi);
  p.mu = 1.0 - p.nu * (1.0 - p.mu_star);
  p.omega = 2.0 * p.nu / (d * (p.nu - 1.0)) + 0.05;

  const double c_density = 1.5;
  for (int n = 1; n <= max_stage; ++n) {
    p.rho_seq.push_back(std::min(0.24, c_density / (static_cast<double>(n) * n)));
    double target = std::pow(static_cast<double>(n), p.omega);
    long sig = static_cast<long>(std::ceil(target));
    if (sig % 2 == 0) ++sig;
    if (sig < 1) sig = 1;
    p.sigma_seq.push_back(sig);
  }

  auto bad = p.check();
  // the scale window may be unsatisfiable at tiny n; all other checks must hold
  std::erase_if(bad, [](const std::string& s) { return s.starts_with("scale_window"); });
  std::erase_if(bad, [](const std::string& s) { return s.starts_with("density_limit"); });
  if (!bad.empty()) throw ParameterError("derive_params: " + bad.front());
  return p;
}

// ------------------------------------------------------- TransienceParams

long TransienceParams::alpha(int n) const {
  if (!alpha_override.empty()) {
    if (n >= 1 && n <= static_cast<int>(alpha_override.size()))
      return alpha_override[static_cast<size_t>(n - 1)];
    throw ParameterError("TransienceParams: alpha override too short");
  }
  return static_cast<long>(std::ceil(std::pow(static_cast<double>(n + 1), 2.0 * lambda * dim) - 1e-9));
}

long TransienceParams::sigma(int n) const {
  if (!sigma_override.empty()) {
    if (n >= 1 && n <= static_cast<int>(sigma_override.size()))
      return sigma_override[static_cast<size_t>(n - 1)];
    throw ParameterError("TransienceParams: sigma override too short");
  }
  return static_cast<long>(n + 1) * (n + 1);
}

double TransienceParams::cube_side(int n) const {
  double side = 1.0;
  for (int i = 1; i <= n; ++i) side *= static_cast<double>(sigma(i));
  return side;
}

double TransienceParams::alpha_prod(int n) const {
  double prod = 1.0;
  for (int i = 1; i <= n; ++i) prod *= static_cast<double>(alpha(i));
  return prod;
}

TransienceParams derive_transience_params(const KernelSpec& kernel, int d, int n1,
                                          std::optional<double> lambda) {
  if (n1 < 1) throw ParameterError("derive_transience_params: n1 must be >= 1");
  RenormParams base = derive_params(kernel, d, 0.5, 0.8, 4, 1.0, 0);
  TransienceParams tp;
  tp.dim = d;
  tp.n1 = n1;
  tp.mu = base.mu;
  double lo = std::max(0.5, 1.0 / base.nu);
  tp.lambda = lambda.value_or(0.5 * (lo + 1.0));
  if (!(tp.lambda > lo && tp.lambda < 1.0))
    throw ParameterError("derive_transience_params: lambda must be in (max(1/2,1/nu), 1)");
  return tp;
}

// ---------------------------------------------------------------- aliveness

CubeOutcome stage0_alive(const GeoGraph& graph, const BoxDomain& cube,
                         const RenormParams& params) {
  CubeOutcome out;
  bool clipped = false;
  auto sets = preclusters(graph, cube, params.k_reach, &clipped);
  out.clipped = clipped;
  const std::size_t need = static_cast<std::size_t>(params.stage0_threshold());
  const std::vector<std::uint32_t>* best = nullptr;
  for (const auto& s : sets) {
    if (s.size() >= need && (!best || s.size() > best->size())) best = &s;
  }
  if (best) {
    out.positive = true;
    out.witness = *best;
    out.witness_sizes = {best->size()};
  }
  return out;
}

CubeOutcome stage_alive(const GeoGraph& graph, const BoxDomain& cube, int stage,
                        const RenormParams& params) {
  if (stage < 0 || stage > params.max_stage())
    throw ParameterError("stage_alive: stage outside the stored parameter range");
  if (stage == 0) return stage0_alive(graph, cube, params);

  CubeOutcome out;
  const long sigma = params.sigma_seq[static_cast<size_t>(stage - 1)];
  const double sub_side = params.m(stage - 1);
  const long need = params.r(stage);
  const auto vreq = ceil_count(params.v(stage - 1));

  auto centers = subcube_centers(cube, sigma, sub_side);

  long alive_subcubes = 0;
  long alive_with_regular = 0;
  std::vector<std::vector<std::uint32_t>> candidates;  // regular preclusters
  std::vector<int> cand_group;                         // owning subcube
  int num_groups = static_cast<int>(centers.size());

  for (std::size_t ci = 0; ci < centers.size(); ++ci) {
    BoxDomain sub = BoxDomain::cube_at(centers[ci], sub_side);
    CubeOutcome rec = stage_alive(graph, sub, stage - 1, params);
    out.exact = out.exact && rec.exact;
    out.clipped = out.clipped || rec.clipped;
    if (rec.positive) ++alive_subcubes;

    bool clipped = false;
    auto sets = preclusters(graph, sub, params.k_reach, &clipped);
    out.clipped = out.clipped || clipped;
    bool has_regular = false;
    for (auto& s : sets) {
      if (s.size() < vreq) continue;
      if (!has_regular_subset(set_marks(graph, s), vreq, params.mu)) continue;
      has_regular = true;
      candidates.push_back(std::move(s));
      cand_group.push_back(static_cast<int>(ci));
    }
    if (rec.positive && has_regular) ++alive_with_regular;
  }

  // A(n) and B(n)
  if (alive_subcubes < need || alive_with_regular < need) return out;

  // C(n): vacuous for r_n = 1
  if (need <= 1) {
    out.positive = true;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      out.witness = candidates[i];
      out.witness_sizes = {candidates[i].size()};
      break;
    }
    return out;
  }

  auto adj = set_adjacency(graph, candidates);
  std::vector<int> clique;
  bool exact = true;
  bool found = find_group_clique(adj, cand_group, num_groups, need, clique, &exact);
  out.exact = out.exact && exact;
  if (!found) return out;

  out.positive = true;
  for (int idx : clique) {
    const auto& s = candidates[static_cast<size_t>(idx)];
    out.witness.insert(out.witness.end(), s.begin(), s.end());
    out.witness_sizes.push_back(s.size());
  }
  std::sort(out.witness.begin(), out.witness.end());
  return out;
}

// ----------------------------------------------------------------- goodness

namespace {

struct GoodNode {
  bool good = false;
  bool exact = true;
  std::vector<std::vector<std::uint32_t>> renorm_clusters;  // level-n clusters
  std::vector<std::vector<std::uint32_t>> constituents;     // level-(n-1) clusters
};

// Complete-bipartite K_{need,need} between the constituent lists of two
// good subcubes, all cross pairs adjacent. Exhaustive over row subsets.
bool well_connected(const std::vector<std::vector<char>>& adj,
                    const std::vector<int>& left, const std::vector<int>& right,
                    long need, bool* exact) {
  if (need <= 0) return true;
  if (static_cast<long>(left.size()) < need || static_cast<long>(right.size()) < need)
    return false;
  // count, per left node, its adjacency into `right`
  const std::size_t nr = right.size();
  if (nr > 64) {
    if (exact) *exact = false;
    return false;  // beyond the exhaustive window; treat as not shown
  }
  std::vector<std::uint64_t> row(left.size(), 0);
  for (std::size_t i = 0; i < left.size(); ++i)
    for (std::size_t j = 0; j < nr; ++j)
      if (adj[static_cast<size_t>(left[i])][static_cast<size_t>(right[j])])
        row[i] |= (std::uint64_t{1} << j);
  // choose `need` rows whose common column set has >= need members
  std::vector<std::size_t> pick;
  std::function<bool(std::size_t, std::uint64_t)> rec = [&](std::size_t start,
                                                            std::uint64_t common) -> bool {
    if (static_cast<long>(pick.size()) == need)
      return std::popcount(common) >= static_cast<int>(need);
    for (std::size_t i = start; i < row.size(); ++i) {
      std::uint64_t next = common & row[i];
      if (std::popcount(next) < static_cast<int>(need)) continue;
      pick.push_back(i);
      if (rec(i + 1, next)) return true;
      pick.pop_back();
    }
    return false;
  };
  return rec(0, ~std::uint64_t{0} >> (64 - nr));
}

GoodNode eval_good(const GeoGraph& graph, const BoxDomain& cube, int stage,
                   const TransienceParams& tp) {
  GoodNode node;
  if (stage == tp.n1) {
    const auto need = ceil_count(tp.alpha_prod(stage));
    auto comps = preclusters(graph, cube, 0.0);  // components of G[cube]
    for (auto& comp : comps) {
      if (comp.size() < need) continue;
      if (!has_regular_subset(set_marks(graph, comp), need, tp.mu)) continue;
      node.renorm_clusters.push_back(std::move(comp));
    }
    node.good = !node.renorm_clusters.empty();
    return node;
  }

  const long sigma = tp.sigma(stage);
  const double sub_side = tp.cube_side(stage - 1);
  const long need = tp.alpha(stage);
  auto centers = subcube_centers(cube, sigma, sub_side);

  std::vector<GoodNode> subs;
  std::vector<std::size_t> good_idx;
  subs.reserve(centers.size());
  for (auto& c : centers) {
    BoxDomain sub = BoxDomain::cube_at(c, sub_side);
    GoodNode rec = eval_good(graph, sub, stage - 1, tp);
    node.exact = node.exact && rec.exact;
    if (rec.good) good_idx.push_back(subs.size());
    subs.push_back(std::move(rec));
  }
  if (static_cast<long>(good_idx.size()) < need) return node;  // E1 / F1

  if (stage == tp.n1 + 1) {
    // E2: one level-n1 cluster per good subcube, mutually adjacent in G[cube]
    std::vector<std::vector<std::uint32_t>> candidates;
    std::vector<int> group;
    for (std::size_t gi = 0; gi < good_idx.size(); ++gi) {
      for (const auto& cl : subs[good_idx[gi]].renorm_clusters) {
        candidates.push_back(cl);
        group.push_back(static_cast<int>(gi));
      }
    }
    auto adj = set_adjacency(graph, candidates);
    std::vector<int> clique;
    bool exact = true;
    if (!find_group_clique(adj, group, static_cast<int>(good_idx.size()), need, clique,
                           &exact)) {
      node.exact = node.exact && exact;
      return node;
    }
    node.exact = node.exact && exact;
    // E3: the adjacency-joined cluster must be regular at the next size
    std::vector<std::uint32_t> joined;
    std::vector<std::vector<std::uint32_t>> used;
    for (int idx : clique) {
      joined.insert(joined.end(), candidates[static_cast<size_t>(idx)].begin(),
                    candidates[static_cast<size_t>(idx)].end());
      used.push_back(candidates[static_cast<size_t>(idx)]);
    }
    const auto vreq = ceil_count(tp.alpha_prod(stage));
    if (joined.size() < vreq ||
        !has_regular_subset(set_marks(graph, joined), vreq, tp.mu))
      return node;
    std::sort(joined.begin(), joined.end());
    node.good = true;
    node.renorm_clusters.push_back(std::move(joined));
    node.constituents = std::move(used);
    return node;
  }

  // stage > n1+1: F conditions with two-level well-connectedness
  const long wc_need = tp.alpha(stage - 2);
  // adjacency over all constituents of all good subcubes
  std::vector<std::vector<std::uint32_t>> all_sets;
  std::vector<std::vector<int>> owned(good_idx.size());
  for (std::size_t gi = 0; gi < good_idx.size(); ++gi) {
    for (const auto& cl : subs[good_idx[gi]].constituents) {
      owned[gi].push_back(static_cast<int>(all_sets.size()));
      all_sets.push_back(cl);
    }
  }
  auto adj = set_adjacency(graph, all_sets);

  std::vector<std::vector<char>> wc(good_idx.size(),
                                    std::vector<char>(good_idx.size(), 0));
  bool exact = true;
  for (std::size_t i = 0; i < good_idx.size(); ++i)
    for (std::size_t j = i + 1; j < good_idx.size(); ++j) {
      bool ok = well_connected(adj, owned[i], owned[j], wc_need, &exact);
      wc[i][j] = wc[j][i] = ok ? 1 : 0;
    }
  node.exact = node.exact && exact;

  // F2: a set of `need` good subcubes, pairwise well-connected
  std::vector<int> trivial_groups(good_idx.size());
  for (std::size_t i = 0; i < trivial_groups.size(); ++i)
    trivial_groups[i] = static_cast<int>(i);
  std::vector<int> family;
  bool cexact = true;
  if (!find_group_clique(wc, trivial_groups, static_cast<int>(good_idx.size()), need,
                         family, &cexact)) {
    node.exact = node.exact && cexact;
    return node;
  }
  node.exact = node.exact && cexact;

  // F3: the union of the members' level-(n-1) clusters must be regular
  std::vector<std::uint32_t> joined;
  std::vector<std::vector<std::uint32_t>> used;
  for (int f : family) {
    const auto& cl = subs[good_idx[static_cast<size_t>(f)]].renorm_clusters.front();
    joined.insert(joined.end(), cl.begin(), cl.end());
    used.push_back(cl);
  }
  const auto vreq = ceil_count(tp.alpha_prod(stage));
  if (joined.size() < vreq || !has_regular_subset(set_marks(graph, joined), vreq, tp.mu))
    return node;
  std::sort(joined.begin(), joined.end());
  node.good = true;
  node.renorm_clusters.push_back(std::move(joined));
  node.constituents = std::move(used);
  return node;
}

}  // namespace

CubeOutcome stage_good(const GeoGraph& graph, const BoxDomain& cube, int stage,
                       const TransienceParams& params) {
  if (stage < params.n1)
    throw ParameterError("stage_good: stage must be >= n1");
  GoodNode node = eval_good(graph, cube, stage, params);
  CubeOutcome out;
  out.positive = node.good;
  out.exact = node.exact;
  if (node.good) {
    out.witness = node.renorm_clusters.front();
    out.witness_sizes = {out.witness.size()};
  }
  return out;
}

// ------------------------------------------------------------------- survey

namespace {

template <typename Eval>
RenormReport survey_impl(const GeoGraph& graph, std::string mode, int stage_lo,
                         int stage_hi, const std::function<double(int)>& side_of,
                         Eval eval) {
  RenormReport report;
  report.mode = std::move(mode);
  const BoxDomain& dom = graph.vertices.base.domain;
  const int d = dom.dim;
  for (int stage = stage_lo; stage <= stage_hi; ++stage) {
    StageRecord sr;
    sr.stage = stage;
    const double side = side_of(stage);
    // translates centred on the side-length grid, cube fully inside the domain
    std::vector<long> lo(static_cast<size_t>(d)), hi(static_cast<size_t>(d));
    bool any = true;
    for (int i = 0; i < d; ++i) {
      lo[i] = static_cast<long>(std::ceil((dom.lo(i) + side / 2.0) / side - 1e-9));
      hi[i] = static_cast<long>(std::floor((dom.hi(i) - side / 2.0) / side + 1e-9));
      if (hi[i] < lo[i]) any = false;
    }
    if (any) {
      std::vector<long> idx(lo);
      for (;;) {
        std::vector<double> center(static_cast<size_t>(d));
        for (int i = 0; i < d; ++i) center[i] = static_cast<double>(idx[i]) * side;
        BoxDomain cube = BoxDomain::cube_at(center, side);
        CubeOutcome oc = eval(cube, stage);
        ++sr.cubes;
        if (oc.positive) {
          ++sr.positive;
          sr.witness_sizes.push_back(oc.witness.size());
        }
        if (oc.clipped) ++sr.clipped;
        CubeRecord cr;
        cr.stage = stage;
        cr.center = center;
        cr.positive = oc.positive;
        cr.exact = oc.exact;
        cr.clipped = oc.clipped;
        cr.witness_size = oc.witness.size();
        report.cubes.push_back(std::move(cr));

        int axis = d - 1;
        while (axis >= 0) {
          if (++idx[axis] <= hi[axis]) break;
          idx[axis] = lo[axis];
          --axis;
        }
        if (axis < 0) break;
      }
    }
    sr.fraction = sr.cubes > 0 ? static_cast<double>(sr.positive) / sr.cubes : 0.0;
    report.stages.push_back(std::move(sr));
  }
  return report;
}

}  // namespace

RenormReport survey_alive(const GeoGraph& graph, const RenormParams& params,
                          int max_stage) {
  if (max_stage > params.max_stage())
    throw ParameterError("survey_alive: max_stage beyond the stored sequences");
  return survey_impl(graph, "alive", 0, max_stage,
                     [&](int stage) { return params.m(stage); },
                     [&](const BoxDomain& cube, int stage) {
                       return stage_alive(graph, cube, stage, params);
                     });
}

RenormReport survey_good(const GeoGraph& graph, const TransienceParams& params,
                         int max_stage) {
  if (max_stage < params.n1)
    throw ParameterError("survey_good: max_stage must be >= n1");
  return survey_impl(graph, "good", params.n1, max_stage,
                     [&](int stage) { return params.cube_side(stage); },
                     [&](const BoxDomain& cube, int stage) {
                       return stage_good(graph, cube, stage, params);
                     });
}

}  // namespace perclab
