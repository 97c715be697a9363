#include "perclab/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "perclab/errors.hpp"

namespace perclab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_marks(double s, double t) {
  if (!(s > 0.0 && s < 1.0 && t > 0.0 && t < 1.0))
    throw ParameterError("kernel: marks must lie strictly in (0,1)");
}

// Adaptive Simpson with recursion on the standard error estimate.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double fa, double fm, double fb, double whole, double tol,
                        int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate_1d(const std::function<double(double)>& f, double a, double b,
                    double rel_tol) {
  if (b <= a) return 0.0;
  double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  if (!std::isfinite(fa) || !std::isfinite(fb) || !std::isfinite(fm)) return kInf;
  double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  double scale = std::max(std::fabs(whole), 1e-300);
  return adaptive_simpson(f, a, b, fa, fm, fb, whole, rel_tol * scale, 48);
}

// int_{lo}^{1-lo} s^{-a} ds
double power_segment(double a, double lo) {
  double hi = 1.0 - lo;
  if (a == 1.0) return std::log(hi / lo);
  return (std::pow(hi, 1.0 - a) - std::pow(lo, 1.0 - a)) / (1.0 - a);
}

}  // namespace

KernelSpec KernelSpec::bernoulli_nn(int d, double p) {
  KernelSpec k;
  k.family = KernelFamily::bernoulli_nn;
  k.dim = d;
  k.nn_p = p;
  k.validate();
  return k;
}

KernelSpec KernelSpec::long_range(int d, double beta, double delta) {
  KernelSpec k;
  k.family = KernelFamily::long_range;
  k.dim = d;
  k.beta = beta;
  k.delta = delta;
  k.validate();
  return k;
}

KernelSpec KernelSpec::scale_free(int d, double beta, double gamma, double delta) {
  KernelSpec k;
  k.family = KernelFamily::scale_free;
  k.dim = d;
  k.beta = beta;
  k.gamma = gamma;
  k.delta = delta;
  k.validate();
  return k;
}

KernelSpec KernelSpec::wdrcm(int d, GKind g, double gamma, double gamma2, RhoKind rho,
                             double beta, double delta) {
  KernelSpec k;
  k.family = KernelFamily::wdrcm;
  k.dim = d;
  k.g_kind = g;
  k.gamma = gamma;
  k.gamma2 = gamma2;
  k.rho_kind = rho;
  k.beta = beta;
  k.delta = delta;
  k.validate();
  return k;
}

void KernelSpec::validate() const {
  if (dim < 1) throw ParameterError("kernel: dimension must be >= 1");
  if (family == KernelFamily::bernoulli_nn) {
    if (!(nn_p >= 0.0 && nn_p <= 1.0))
      throw ParameterError("kernel: bernoulli retention must be in [0,1]");
    return;
  }
  if (!(beta > 0.0)) throw ParameterError("kernel: beta must be positive");
  if (!(delta > 0.0)) throw ParameterError("kernel: delta must be positive");
  if (!(gamma >= 0.0) || !(gamma2 >= 0.0))
    throw ParameterError("kernel: gamma exponents must be non-negative");
}

double KernelSpec::g(double s, double t) const {
  switch (g_kind) {
    case GKind::product:
      return std::pow(s * t, gamma);
    case GKind::min_max:
      return std::pow(std::min(s, t), gamma) * std::pow(std::max(s, t), gamma2);
    case GKind::max_only:
      return std::pow(std::max(s, t), gamma);
  }
  return 1.0;
}

double KernelSpec::rho(double x) const {
  switch (rho_kind) {
    case RhoKind::pareto_capped:
      return beta * std::pow(std::max(x, 1.0), -delta);
    case RhoKind::unit_capped:
      if (x <= 0.0) return 1.0;
      return std::min(1.0, beta * std::pow(x, -delta));
  }
  return 0.0;
}

double KernelSpec::phi(double s, double t, double r) const {
  check_marks(s, t);
  if (!(r >= 0.0)) throw ParameterError("kernel: distance must be >= 0");
  switch (family) {
    case KernelFamily::bernoulli_nn:
      // nearest-neighbour: active for r <= 1 so phi stays non-increasing
      if (r > 1.0) return 0.0;
      return nn_p >= 1.0 ? kInf : -std::log1p(-nn_p);
    case KernelFamily::long_range:
      if (r == 0.0) return kInf;
      return beta * std::pow(r, -delta * dim);
    case KernelFamily::scale_free:
      if (r == 0.0) return kInf;
      return beta * std::pow(s * t, -gamma * delta) * std::pow(r, -delta * dim);
    case KernelFamily::wdrcm:
      return rho(g(s, t) * std::pow(r, dim));
  }
  return 0.0;
}

double KernelSpec::edge_prob(double s, double t, double r) const {
  double p = phi(s, t, r);
  if (p == kInf) return 1.0;
  return -std::expm1(-p);
}

bool KernelSpec::marks_matter() const {
  switch (family) {
    case KernelFamily::bernoulli_nn:
    case KernelFamily::long_range:
      return false;
    case KernelFamily::scale_free:
      return gamma * delta > 0.0;
    case KernelFamily::wdrcm:
      return g_kind == GKind::min_max ? (gamma > 0.0 || gamma2 > 0.0) : gamma > 0.0;
  }
  return true;
}

std::string KernelSpec::family_name() const {
  switch (family) {
    case KernelFamily::bernoulli_nn: return "bernoulli_nn";
    case KernelFamily::long_range: return "long_range";
    case KernelFamily::scale_free: return "scale_free";
    case KernelFamily::wdrcm: return "wdrcm";
  }
  return "?";
}

double mark_integral_quadrature(const KernelSpec& k, double r, double lo) {
  if (!(lo > 0.0 && lo < 0.5))
    throw ParameterError("mark_integral: bounds cross (need 0 < lo < 1/2)");
  const double hi = 1.0 - lo;
  // corners carry the largest values (phi non-increasing in the marks)
  if (k.phi(lo, lo, r) == kInf) return kInf;
  auto inner = [&](double s) {
    return integrate_1d([&](double t) { return k.phi(s, t, r); }, lo, hi, 1e-8);
  };
  return integrate_1d(inner, lo, hi, 1e-7);
}

double mark_integral_bounds(const KernelSpec& k, double r, double lo) {
  if (!(lo > 0.0 && lo < 0.5))
    throw ParameterError("mark_integral: bounds cross (need 0 < lo < 1/2)");
  const double len = 1.0 - 2.0 * lo;
  switch (k.family) {
    case KernelFamily::bernoulli_nn:
      return k.phi(0.5, 0.5, r) * len * len;
    case KernelFamily::long_range:
      return k.beta * std::pow(r, -k.delta * k.dim) * len * len;
    case KernelFamily::scale_free: {
      if (r == 0.0) return kInf;
      double seg = power_segment(k.gamma * k.delta, lo);
      return k.beta * std::pow(r, -k.delta * k.dim) * seg * seg;
    }
    case KernelFamily::wdrcm: {
      // closed form when the profile cap is inactive on the whole square;
      // the minimum of g over [lo,1-lo]^2 sits at (lo,lo)
      double x_min = k.g(lo, lo) * std::pow(r, k.dim);
      double cap_edge = k.rho_kind == RhoKind::pareto_capped
                            ? 1.0
                            : std::pow(k.beta, 1.0 / k.delta);
      if (k.g_kind == GKind::product && x_min >= cap_edge) {
        double seg = power_segment(k.gamma * k.delta, lo);
        return k.beta * std::pow(r, -k.delta * k.dim) * seg * seg;
      }
      return mark_integral_quadrature(k, r, lo);
    }
  }
  return 0.0;
}

double mark_integral(const KernelSpec& k, double r, double mu) {
  if (!(r > 0.0)) throw ParameterError("mark_integral: r must be positive");
  if (!(mu >= 0.0 && mu < 1.0)) throw ParameterError("mark_integral: mu must be in [0,1)");
  double lo = std::pow(r, k.dim * (mu - 1.0));
  return mark_integral_bounds(k, r, lo);
}

DeltaEffEstimate estimate_delta_eff(const KernelSpec& k, double mu,
                                    const std::vector<double>& r_grid) {
  if (r_grid.size() < 4)
    throw ParameterError("estimate_delta_eff: need at least 4 grid points");
  for (std::size_t i = 1; i < r_grid.size(); ++i) {
    if (!(r_grid[i] > r_grid[i - 1]))
      throw ParameterError("estimate_delta_eff: r grid must be strictly increasing");
    if (r_grid[i] / r_grid[i - 1] < 2.0 - 1e-9)
      throw ParameterError("estimate_delta_eff: r grid ratio must be >= 2");
  }

  DeltaEffEstimate est;
  est.mu = mu;
  est.r_grid = r_grid;
  est.integral_values.reserve(r_grid.size());
  for (double r : r_grid) {
    double v = mark_integral(k, r, mu);
    if (!(v > 0.0) || !std::isfinite(v))
      throw NumericError("estimate_delta_eff: integral vanished or diverged on the grid");
    est.integral_values.push_back(v);
  }

  const std::size_t m = r_grid.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::vector<double> xs(m), ys(m);
  for (std::size_t i = 0; i < m; ++i) {
    xs[i] = std::log(r_grid[i]);
    ys[i] = -std::log(est.integral_values[i]) / static_cast<double>(k.dim);
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  double n = static_cast<double>(m);
  double denom = n * sxx - sx * sx;
  est.slope = (n * sxy - sx * sy) / denom;
  double intercept = (sy - est.slope * sx) / n;
  double ss = 0;
  for (std::size_t i = 0; i < m; ++i) {
    double e = ys[i] - (intercept + est.slope * xs[i]);
    ss += e * e;
  }
  est.residual = std::sqrt(ss / n);
  return est;
}

std::vector<double> geometric_grid(double r0, double ratio, int points) {
  std::vector<double> g;
  g.reserve(static_cast<size_t>(points));
  double r = r0;
  for (int i = 0; i < points; ++i) {
    g.push_back(r);
    r *= ratio;
  }
  return g;
}

}  // namespace perclab
