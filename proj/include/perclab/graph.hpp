#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "perclab/kernels.hpp"
#include "perclab/point_process.hpp"

namespace perclab {

struct GeoEdge {
  std::uint32_t a = 0, b = 0;  // a < b
  double length = 0.0;
};

/// An undirected geometric graph over a marked cloud. Edges are stored in
/// canonical (a,b)-sorted order with cached Euclidean (torus-aware) lengths.
struct GeoGraph {
  MarkedCloud vertices;
  std::vector<GeoEdge> edges;
  std::uint64_t build_seed = 0;

  std::size_t num_vertices() const { return vertices.size(); }
  int dim() const { return vertices.dim(); }

  /// Hand-built graph from an explicit pair list (lengths computed).
  static GeoGraph from_edges(MarkedCloud cloud,
                             const std::vector<std::pair<std::uint32_t, std::uint32_t>>& pairs);
};

/// Reference sampler: every unordered pair is tested with its pair-keyed
/// uniform, so rebuilds under modified marks or kernels share randomness.
GeoGraph build_graph_naive(const MarkedCloud& cloud, const KernelSpec& kernel,
                           std::uint64_t seed);

/// Cell-list sampler, distributionally identical to the naive builder.
/// Cell pairs are dominated by p_max derived from minimal marks and minimal
/// inter-cell distance; candidates are enumerated by geometric skipping and
/// accepted with prob phi/p_max. Blocks with p_max > 0.25 (and same-cell
/// blocks) fall back to exhaustive pair-keyed testing. cell_side <= 0 picks
/// 4x the expected inter-point spacing.
GeoGraph build_graph_cells(const MarkedCloud& cloud, const KernelSpec& kernel,
                           double cell_side, std::uint64_t seed);

/// Independent Bernoulli bond percolation; one pair-keyed uniform per edge,
/// so retained sets are nested across p for a fixed seed.
GeoGraph bond_percolate(const GeoGraph& graph, double p, std::uint64_t seed);

/// Remove all edges longer than ell (edges with length <= ell remain).
GeoGraph truncate(const GeoGraph& graph, double ell);

/// Subgraph induced by vertices located in `box` (must lie in the domain).
GeoGraph induced_subgraph(const GeoGraph& graph, const BoxDomain& box);

/// Subgraph induced by an explicit vertex set (indices are remapped to the
/// order given).
GeoGraph subgraph_by_vertices(const GeoGraph& graph,
                              const std::vector<std::uint32_t>& keep);

}  // namespace perclab
