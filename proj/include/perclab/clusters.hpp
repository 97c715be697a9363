#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "perclab/graph.hpp"
#include "perclab/model.hpp"

namespace perclab {

/// Union-find partition of the vertex set into connected components.
class Partition {
 public:
  explicit Partition(std::size_t n);

  void unite(std::uint32_t a, std::uint32_t b);
  std::uint32_t find(std::uint32_t v) const;
  std::size_t component_size(std::uint32_t v) const;
  std::size_t num_components() const { return num_components_; }
  std::size_t num_vertices() const { return parent_.size(); }
  std::size_t largest_size() const;
  /// Sizes indexed by component root (use find() to look up).
  std::vector<std::vector<std::uint32_t>> component_lists() const;

 private:
  mutable std::vector<std::uint32_t> parent_;
  std::vector<std::uint32_t> size_;
  std::size_t num_components_;
};

/// Exact connected components of the graph.
Partition components(const GeoGraph& graph);

/// Size of the largest component of the subgraph induced by `box`.
std::size_t largest_component_size(const GeoGraph& graph, const BoxDomain& box);

/// Preclusters of a cube with reach k: intersections with the cube of the
/// connected components of the graph restricted to the k-neighbourhood.
/// Returned as sorted original-index vertex sets; `clipped` (optional) is
/// set when the k-neighbourhood had to be cut at the domain edge.
std::vector<std::vector<std::uint32_t>> preclusters(const GeoGraph& graph,
                                                    const BoxDomain& cube, double k,
                                                    bool* clipped = nullptr);

/// Largest precluster; ties broken by the smallest minimal mark, and an
/// exact tie (equal size and equal minimal mark) yields the empty set.
std::vector<std::uint32_t> maximal_precluster(const GeoGraph& graph,
                                              const BoxDomain& cube, double k);

enum class ThetaEstimator { origin_to_boundary, largest_component_fraction };

struct ThetaEstimate {
  ThetaEstimator kind = ThetaEstimator::origin_to_boundary;
  double p = 1.0;
  double n = 0.0;
  double value = 0.0;
  double ci_half = 0.0;  // 95% normal approximation
  long replicas = 0;
};

/// Monte Carlo finite-size proxy for the percolation function: Palm
/// conditions each replica, builds the bond-percolated graph on the side-n
/// box and reports the frequency of the chosen connectivity event.
ThetaEstimate estimate_theta(const ModelSpec& model, double p, double n, double k_reach,
                             long replicas, std::uint64_t seed,
                             ThetaEstimator kind = ThetaEstimator::origin_to_boundary,
                             int threads = 1);

struct FreqEstimate {
  double value = 0.0;
  double ci_half = 0.0;
  long replicas = 0;
};

/// Empirical P(largest component of G[box n] > n^{lambda d}).
FreqEstimate sublinear_cluster_prob(const ModelSpec& model, double lambda, double n,
                                    long replicas, std::uint64_t seed, int threads = 1);

/// 95% CI half-width for a Bernoulli frequency.
double freq_ci_half(double value, long replicas);

}  // namespace perclab
