#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "perclab/clusters.hpp"
#include "perclab/graph.hpp"
#include "perclab/kernels.hpp"

namespace perclab {

/// Parameter system of the multi-scale aliveness scheme. Sequences are
/// stored for stages 1..max_stage (index n-1); derived sequences are
/// recomputed from the base fields.
struct RenormParams {
  int dim = 1;
  long ell = 4;          // stage-0 cube side (even)
  double k_reach = 1.0;  // precluster reach
  double theta = 0.5;    // density target
  double lambda = 0.8;
  double mu_star = 0.1, nu = 1.05, mu = 0.05, omega = 3.0;
  std::vector<double> rho_seq;  // density parameters, rho_n < 1/4
  std::vector<long> sigma_seq;  // odd scale factors

  int max_stage() const { return static_cast<int>(sigma_seq.size()); }
  double m(int stage) const;        // side length of a stage-n cube
  double v(int stage) const;        // precluster cardinality threshold
  long r(int stage) const;          // ceil(rho_n sigma_n^d)
  long stage0_threshold() const;    // ceil(ell^d theta / 2)

  /// Violations of the parameter-system constraints (empty when valid).
  std::vector<std::string> check() const;
};

/// Derive the full parameter set from an effective-decay estimate: pick the
/// smallest grid mu* with estimated decay below 2 (margin 0.05), then nu,
/// mu and omega from it, a capped 1/n^2 density sequence, and the smallest
/// odd scale factors >= n^omega. Throws ParameterError when no grid point
/// reaches the weak decay regime.
RenormParams derive_params(const KernelSpec& kernel, int d, double theta_hat,
                           double lambda, long ell, double k_reach, int max_stage);

/// Parameters of the transience (goodness) scheme: alpha_n = ceil((n+1)^{2 lambda d}),
/// sigma_n = (n+1)^2. Sequences may be overridden for constructed instances.
struct TransienceParams {
  int dim = 1;
  int n1 = 1;
  double lambda = 0.9;  // in (max(1/2, 1/nu), 1)
  double mu = 0.1;
  std::vector<long> alpha_override;  // optional, 1-indexed via [n-1]
  std::vector<long> sigma_override;

  long alpha(int n) const;
  long sigma(int n) const;
  double cube_side(int n) const;   // prod_{i<=n} sigma_i
  double alpha_prod(int n) const;  // prod_{i<=n} alpha_i
};

TransienceParams derive_transience_params(const KernelSpec& kernel, int d, int n1,
                                          std::optional<double> lambda = {});

/// Result of a per-cube certificate evaluation. `exact` is false when the
/// clique search fell back to the greedy lower-bound path.
struct CubeOutcome {
  bool positive = false;
  bool exact = true;
  bool clipped = false;
  std::vector<std::uint32_t> witness;       // certifying vertex set (may be empty)
  std::vector<std::size_t> witness_sizes;   // per component of the certificate
};

/// Stage-0 aliveness: the cube holds a precluster with at least
/// ceil(ell^d theta/2) vertices.
CubeOutcome stage0_alive(const GeoGraph& graph, const BoxDomain& cube,
                         const RenormParams& params);

/// Stage-n aliveness (A/B/C conditions, recursive).
CubeOutcome stage_alive(const GeoGraph& graph, const BoxDomain& cube, int stage,
                        const RenormParams& params);

/// Goodness of a stage-n cube in the transience scheme (E/F conditions with
/// the two-level well-connectedness recursion).
CubeOutcome stage_good(const GeoGraph& graph, const BoxDomain& cube, int stage,
                       const TransienceParams& params);

struct StageRecord {
  int stage = 0;
  long cubes = 0;
  long positive = 0;
  double fraction = 0.0;
  long clipped = 0;
  std::vector<std::size_t> witness_sizes;
};

struct CubeRecord {
  int stage = 0;
  std::vector<double> center;
  bool positive = false;
  bool exact = true;
  bool clipped = false;
  std::size_t witness_size = 0;
};

/// Certificate survey over the origin cube and all same-stage translates
/// inside the graph domain.
struct RenormReport {
  std::string mode;  // "alive" | "good"
  std::vector<StageRecord> stages;
  std::vector<CubeRecord> cubes;
};

RenormReport survey_alive(const GeoGraph& graph, const RenormParams& params,
                          int max_stage);
RenormReport survey_good(const GeoGraph& graph, const TransienceParams& params,
                         int max_stage);

}  // namespace perclab
