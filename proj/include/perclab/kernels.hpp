#pragma once

#include <string>
#include <vector>

namespace perclab {

enum class KernelFamily { bernoulli_nn, long_range, scale_free, wdrcm };

/// Symmetric mark kernels g(s,t) used by the wdrcm family.
enum class GKind {
  product,  // (s t)^gamma
  min_max,  // (s ^ t)^gamma * (s v t)^gamma2   (strong kernel)
  max_only  // (s v t)^gamma
};

/// Profile functions rho(x) used by the wdrcm family.
enum class RhoKind {
  pareto_capped,  // beta * (x v 1)^{-delta}
  unit_capped     // min(1, beta * x^{-delta})
};

/// A connection function phi(s,t,r): non-negative, symmetric in the marks,
/// non-increasing in every argument. Edges appear with probability
/// 1 - exp(-phi).
struct KernelSpec {
  KernelFamily family = KernelFamily::long_range;
  int dim = 1;
  double beta = 1.0;
  double delta = 1.0;
  double gamma = 0.0;
  double gamma2 = 0.0;
  double nn_p = 0.5;  // bernoulli_nn retention
  GKind g_kind = GKind::product;
  RhoKind rho_kind = RhoKind::pareto_capped;

  static KernelSpec bernoulli_nn(int d, double p);
  static KernelSpec long_range(int d, double beta, double delta);
  static KernelSpec scale_free(int d, double beta, double gamma, double delta);
  static KernelSpec wdrcm(int d, GKind g, double gamma, double gamma2, RhoKind rho,
                          double beta, double delta);

  void validate() const;

  double g(double s, double t) const;
  double rho(double x) const;

  /// phi(s,t,r). r == 0 takes the limit value (may be +inf).
  double phi(double s, double t, double r) const;

  /// 1 - exp(-phi(s,t,r)), always in [0,1].
  double edge_prob(double s, double t, double r) const;

  /// True when phi actually depends on the marks.
  bool marks_matter() const;

  std::string family_name() const;
};

/// Integral of phi(.,.,r) over the square [lo, 1-lo]^2. Closed form for the
/// product-type families, adaptive quadrature (rel. tol 1e-6) otherwise.
/// Throws ParameterError when the bounds cross (lo >= 1/2).
double mark_integral_bounds(const KernelSpec& k, double r, double lo);

/// Same, forcing the quadrature path (for cross-checking the closed forms).
double mark_integral_quadrature(const KernelSpec& k, double r, double lo);

/// The mark-truncated integral with lo = r^{d(mu-1)}.
double mark_integral(const KernelSpec& k, double r, double mu);

/// Finite-r slope estimate of the effective decay exponent at truncation mu.
struct DeltaEffEstimate {
  double mu = 0.0;
  std::vector<double> r_grid;
  std::vector<double> integral_values;
  double slope = 0.0;
  double residual = 0.0;  // RMS residual of the log-log fit
};

/// Least-squares slope of -log(mark_integral)/d against log r. The grid must
/// be geometric with ratio >= 2 and hold at least 4 points. A zero integral
/// anywhere on the grid raises NumericError.
DeltaEffEstimate estimate_delta_eff(const KernelSpec& k, double mu,
                                    const std::vector<double>& r_grid);

/// Convenience geometric grid r0 * ratio^i, i = 0..points-1.
std::vector<double> geometric_grid(double r0, double ratio, int points);

}  // namespace perclab
