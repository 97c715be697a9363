#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "perclab/graph.hpp"

namespace perclab {

/// Conductance-weighted multigraph. Loops are excluded; parallel edges are
/// allowed (they arise from shorting). pi(x) is the total conductance at x.
struct Network {
  struct Arc {
    std::uint32_t a = 0, b = 0;
    double c = 1.0;
  };
  std::uint32_t num_vertices = 0;
  std::vector<Arc> arcs;

  std::vector<double> pi() const;
  void validate() const;
};

enum class ConductanceKind { unit, inverse_length };

/// Network over a graph's edges: unit conductances, 1/length, or a custom
/// positive map of the edge length.
Network from_graph(const GeoGraph& graph, ConductanceKind kind);
Network from_graph(const GeoGraph& graph, const std::function<double(double)>& by_length);

/// Result of identifying all vertices at graph distance > n from v with a
/// single vertex z (loops dropped, parallel edges kept). When no vertex
/// lies beyond n the network is returned unchanged and z is absent.
struct ShortedNetwork {
  Network net;
  std::uint32_t v = 0;             // image of the source
  std::optional<std::uint32_t> z;  // the merged far vertex, if any
};

ShortedNetwork short_beyond(const Network& net, std::uint32_t v, int n);

/// Effective conductance between v and the merged far vertex z_n, computed
/// from the harmonic voltage problem (1 at v, 0 at z_n) with a Jacobi-
/// preconditioned conjugate-gradient solve, relative residual 1e-10.
/// Returns 0 when z_n is not reachable from v. Throws ParameterError when
/// no vertex lies beyond distance n, NumericError on non-convergence.
double effective_conductance(const Network& net, std::uint32_t v, int n,
                             double* residual = nullptr);

struct ConductanceCurve {
  std::uint32_t source = 0;
  std::vector<int> n_values;      // the n actually used (clamped to ecc-1)
  std::vector<double> values;
  std::vector<double> residuals;
  bool plateau = false;  // min over the last third > 0.5 * max
};

/// Conductance growth curve for an increasing list of n. Requests beyond
/// the last meaningful scale are clamped there, so a finite network's curve
/// terminates at its full-network value.
ConductanceCurve transience_probe(const Network& net, std::uint32_t v,
                                  std::vector<int> n_list);

struct WalkStats {
  double return_frequency = 0.0;  // walkers that revisited the start
  double mean_range = 0.0;        // mean number of distinct vertices seen
};

/// Random walk with transition probabilities proportional to conductances.
WalkStats random_walk_stats(const Network& net, std::uint32_t v, long steps,
                            long walkers, std::uint64_t seed, int threads = 1);

}  // namespace perclab
