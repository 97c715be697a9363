#include "perclab/network.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "perclab/errors.hpp"
#include "perclab/parallel.hpp"
#include "perclab/rng.hpp"

namespace perclab {

namespace {

constexpr std::uint32_t kUnset = std::numeric_limits<std::uint32_t>::max();

// Compressed adjacency (arcs listed from both endpoints).
struct Csr {
  std::vector<std::size_t> offset;
  std::vector<std::uint32_t> neighbor;
  std::vector<double> weight;

  explicit Csr(const Network& net) {
    offset.assign(net.num_vertices + 1, 0);
    for (const auto& a : net.arcs) {
      ++offset[a.a + 1];
      ++offset[a.b + 1];
    }
    for (std::size_t i = 1; i < offset.size(); ++i) offset[i] += offset[i - 1];
    neighbor.resize(offset.back());
    weight.resize(offset.back());
    std::vector<std::size_t> cursor(offset.begin(), offset.end() - 1);
    for (const auto& a : net.arcs) {
      neighbor[cursor[a.a]] = a.b;
      weight[cursor[a.a]++] = a.c;
      neighbor[cursor[a.b]] = a.a;
      weight[cursor[a.b]++] = a.c;
    }
  }
};

std::vector<int> bfs_distances(const Csr& csr, std::uint32_t v) {
  std::vector<int> dist(csr.offset.size() - 1, -1);
  std::queue<std::uint32_t> q;
  dist[v] = 0;
  q.push(v);
  while (!q.empty()) {
    std::uint32_t u = q.front();
    q.pop();
    for (std::size_t e = csr.offset[u]; e < csr.offset[u + 1]; ++e) {
      std::uint32_t w = csr.neighbor[e];
      if (dist[w] < 0) {
        dist[w] = dist[u] + 1;
        q.push(w);
      }
    }
  }
  return dist;
}

}  // namespace

std::vector<double> Network::pi() const {
  std::vector<double> p(num_vertices, 0.0);
  for (const auto& a : arcs) {
    p[a.a] += a.c;
    p[a.b] += a.c;
  }
  return p;
}

void Network::validate() const {
  for (const auto& a : arcs) {
    if (a.a >= num_vertices || a.b >= num_vertices)
      throw ParameterError("Network: arc endpoint out of range");
    if (a.a == a.b) throw ParameterError("Network: loops are not allowed");
    if (!(a.c > 0.0) || !std::isfinite(a.c))
      throw ParameterError("Network: conductances must be positive and finite");
  }
}

Network from_graph(const GeoGraph& graph, ConductanceKind kind) {
  if (kind == ConductanceKind::unit)
    return from_graph(graph, [](double) { return 1.0; });
  return from_graph(graph, [](double len) { return 1.0 / len; });
}

Network from_graph(const GeoGraph& graph, const std::function<double(double)>& by_length) {
  Network net;
  net.num_vertices = static_cast<std::uint32_t>(graph.num_vertices());
  net.arcs.reserve(graph.edges.size());
  for (const GeoEdge& e : graph.edges) {
    double c = by_length(e.length);
    if (!(c > 0.0) || !std::isfinite(c))
      throw ParameterError("from_graph: conductance map produced a non-positive value");
    net.arcs.push_back({e.a, e.b, c});
  }
  return net;
}

ShortedNetwork short_beyond(const Network& net, std::uint32_t v, int n) {
  if (v >= net.num_vertices) throw ParameterError("short_beyond: v not in the network");
  Csr csr(net);
  std::vector<int> dist = bfs_distances(csr, v);

  bool any_far = false;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    if (dist[i] < 0 || dist[i] > n) {
      any_far = true;
      break;
    }
  }
  ShortedNetwork out;
  if (!any_far) {
    out.net = net;
    out.v = v;
    return out;
  }

  std::vector<std::uint32_t> remap(net.num_vertices, kUnset);
  std::uint32_t next = 0;
  for (std::size_t i = 0; i < dist.size(); ++i)
    if (dist[i] >= 0 && dist[i] <= n) remap[i] = next++;
  const std::uint32_t z = next;
  out.net.num_vertices = next + 1;
  out.v = remap[v];
  out.z = z;
  for (const auto& a : net.arcs) {
    std::uint32_t na = remap[a.a] == kUnset ? z : remap[a.a];
    std::uint32_t nb = remap[a.b] == kUnset ? z : remap[a.b];
    if (na == nb) continue;  // loop after merging
    out.net.arcs.push_back({na, nb, a.c});
  }
  return out;
}

namespace {

// CG on the voltage problem with Dirichlet data (1 at v, 0 at z),
// restricted to the component of v. Returns the net current out of v.
double solve_conductance(const Network& net, std::uint32_t v, std::uint32_t z,
                         double* residual_out) {
  Csr csr(net);
  // unknowns: vertices reachable from v, excluding v and z
  std::vector<int> dist = bfs_distances(csr, v);
  if (dist[z] < 0) {
    if (residual_out) *residual_out = 0.0;
    return 0.0;
  }
  std::vector<std::uint32_t> index(net.num_vertices, kUnset);
  std::vector<std::uint32_t> unknowns;
  for (std::uint32_t i = 0; i < net.num_vertices; ++i) {
    if (i == v || i == z || dist[i] < 0) continue;
    index[i] = static_cast<std::uint32_t>(unknowns.size());
    unknowns.push_back(i);
  }
  const std::size_t m = unknowns.size();

  std::vector<double> pi = net.pi();
  std::vector<double> x(m, 0.0), b(m, 0.0);
  for (std::size_t ui = 0; ui < m; ++ui) {
    std::uint32_t u = unknowns[ui];
    for (std::size_t e = csr.offset[u]; e < csr.offset[u + 1]; ++e)
      if (csr.neighbor[e] == v) b[ui] += csr.weight[e];
  }

  auto apply = [&](const std::vector<double>& in, std::vector<double>& out) {
    for (std::size_t ui = 0; ui < m; ++ui) {
      std::uint32_t u = unknowns[ui];
      double acc = pi[u] * in[ui];
      for (std::size_t e = csr.offset[u]; e < csr.offset[u + 1]; ++e) {
        std::uint32_t w = csr.neighbor[e];
        if (index[w] != kUnset) acc -= csr.weight[e] * in[index[w]];
      }
      out[ui] = acc;
    }
  };

  double bnorm = 0.0;
  for (double t : b) bnorm += t * t;
  bnorm = std::sqrt(bnorm);
  double rel_residual = 0.0;

  if (m > 0 && bnorm > 0.0) {
    const double tol = 1e-10;
    const long max_iter = 100000;
    std::vector<double> r = b, zv(m), p(m), ap(m);
    auto precond = [&](const std::vector<double>& in, std::vector<double>& out) {
      for (std::size_t ui = 0; ui < m; ++ui) out[ui] = in[ui] / pi[unknowns[ui]];
    };
    precond(r, zv);
    p = zv;
    double rz = 0.0;
    for (std::size_t i = 0; i < m; ++i) rz += r[i] * zv[i];
    long it = 0;
    for (; it < max_iter; ++it) {
      double rnorm = 0.0;
      for (double t : r) rnorm += t * t;
      rel_residual = std::sqrt(rnorm) / bnorm;
      if (rel_residual <= tol) break;
      apply(p, ap);
      double pap = 0.0;
      for (std::size_t i = 0; i < m; ++i) pap += p[i] * ap[i];
      if (!(pap > 0.0)) throw NumericError("effective_conductance: solver breakdown");
      double alpha = rz / pap;
      for (std::size_t i = 0; i < m; ++i) {
        x[i] += alpha * p[i];
        r[i] -= alpha * ap[i];
      }
      precond(r, zv);
      double rz_new = 0.0;
      for (std::size_t i = 0; i < m; ++i) rz_new += r[i] * zv[i];
      double beta = rz_new / rz;
      rz = rz_new;
      for (std::size_t i = 0; i < m; ++i) p[i] = zv[i] + beta * p[i];
    }
    if (it == max_iter)
      throw NumericError("effective_conductance: CG did not converge, residual " +
                         std::to_string(rel_residual));
  }
  if (residual_out) *residual_out = rel_residual;

  // net current out of v; voltages: v = 1, z = 0, unknowns = x
  double current = 0.0;
  for (std::size_t e = csr.offset[v]; e < csr.offset[v + 1]; ++e) {
    std::uint32_t w = csr.neighbor[e];
    double volt = w == z ? 0.0 : (index[w] != kUnset ? x[index[w]] : 1.0);
    if (w == v) continue;
    current += csr.weight[e] * (1.0 - volt);
  }
  return current;
}

}  // namespace

double effective_conductance(const Network& net, std::uint32_t v, int n, double* residual) {
  ShortedNetwork sn = short_beyond(net, v, n);
  if (!sn.z)
    throw ParameterError("effective_conductance: no vertex beyond distance n");
  return solve_conductance(sn.net, sn.v, *sn.z, residual);
}

ConductanceCurve transience_probe(const Network& net, std::uint32_t v,
                                  std::vector<int> n_list) {
  if (v >= net.num_vertices) throw ParameterError("transience_probe: v not in network");
  for (std::size_t i = 1; i < n_list.size(); ++i)
    if (n_list[i] <= n_list[i - 1])
      throw ParameterError("transience_probe: n list must be increasing");

  Csr csr(net);
  std::vector<int> dist = bfs_distances(csr, v);
  int ecc = 0;
  bool unreachable = false;
  for (int d : dist) {
    if (d < 0)
      unreachable = true;
    else
      ecc = std::max(ecc, d);
  }
  const int max_n = unreachable ? std::numeric_limits<int>::max() : ecc - 1;

  ConductanceCurve curve;
  curve.source = v;
  for (int n : n_list) {
    int n_eff = std::min(n, max_n);
    if (n_eff < 0) break;
    if (!curve.n_values.empty() && n_eff <= curve.n_values.back()) continue;
    double residual = 0.0;
    double value = effective_conductance(net, v, n_eff, &residual);
    curve.n_values.push_back(n_eff);
    curve.values.push_back(value);
    curve.residuals.push_back(residual);
  }

  if (!curve.values.empty()) {
    double top = *std::max_element(curve.values.begin(), curve.values.end());
    std::size_t tail_begin = (curve.values.size() * 2) / 3;
    double tail_min = *std::min_element(curve.values.begin() + static_cast<long>(tail_begin),
                                        curve.values.end());
    curve.plateau = tail_min > 0.5 * top;
  }
  return curve;
}

WalkStats random_walk_stats(const Network& net, std::uint32_t v, long steps, long walkers,
                            std::uint64_t seed, int threads) {
  if (steps < 1 || walkers < 1)
    throw ParameterError("random_walk_stats: steps and walkers must be >= 1");
  if (v >= net.num_vertices) throw ParameterError("random_walk_stats: v not in network");
  Csr csr(net);
  // cumulative conductance per vertex for inverse-cdf transitions
  std::vector<double> cum(csr.weight.size());
  std::vector<double> total(net.num_vertices, 0.0);
  for (std::uint32_t u = 0; u < net.num_vertices; ++u) {
    double acc = 0.0;
    for (std::size_t e = csr.offset[u]; e < csr.offset[u + 1]; ++e) {
      acc += csr.weight[e];
      cum[e] = acc;
    }
    total[u] = acc;
  }
  if (!(total[v] > 0.0))
    throw ParameterError("random_walk_stats: walk undefined, start vertex has no edges");

  std::vector<char> returned(static_cast<size_t>(walkers), 0);
  std::vector<std::uint32_t> range(static_cast<size_t>(walkers), 0);
  const int nthreads = resolve_threads(threads);

  parallel_for(static_cast<size_t>(walkers), nthreads, [&](std::size_t w) {
    RngStream rng(seed, make_stream_id(StreamPurpose::walker, w));
    std::vector<std::uint64_t> visited_stamp;  // per-walker scratch
    visited_stamp.assign(net.num_vertices, 0);
    std::uint32_t pos = v;
    visited_stamp[pos] = 1;
    std::uint32_t distinct = 1;
    bool back = false;
    for (long s = 0; s < steps; ++s) {
      double target = rng.uniform() * total[pos];
      std::size_t lo = csr.offset[pos], hi = csr.offset[pos + 1];
      // binary search in the cumulative weights
      while (lo + 1 < hi) {
        std::size_t mid = (lo + hi) / 2;
        if (cum[mid - 1] <= target)
          lo = mid;
        else
          hi = mid;
      }
      pos = csr.neighbor[lo];
      if (pos == v) back = true;
      if (!visited_stamp[pos]) {
        visited_stamp[pos] = 1;
        ++distinct;
      }
      if (total[pos] <= 0.0) break;  // trapped on an isolated vertex
    }
    returned[w] = back ? 1 : 0;
    range[w] = distinct;
  });

  WalkStats stats;
  long back_count = 0;
  double range_sum = 0.0;
  for (long w = 0; w < walkers; ++w) {
    back_count += returned[static_cast<size_t>(w)];
    range_sum += range[static_cast<size_t>(w)];
  }
  stats.return_frequency = static_cast<double>(back_count) / static_cast<double>(walkers);
  stats.mean_range = range_sum / static_cast<double>(walkers);
  return stats;
}

}  // namespace perclab
